"""Multi-version codes: allocation tables, exhaustive checks, bounds and a toy storage simulator.

Exact quantities come back as :class:`fractions.Fraction`.
"""

from fractions import Fraction
import json

from . import _core
from ._core import (
    BudgetExceededError,
    CodeInfeasibleError,
    ConfigurationError,
    ContractError,
    DomainError,
    Error,
    InsufficientDataError,
    PreconditionError,
    compute_t,
    feasibility_check,
    run_criterion,
)

__all__ = [
    "BudgetExceededError",
    "CodeInfeasibleError",
    "ConfigurationError",
    "ContractError",
    "DomainError",
    "Error",
    "InsufficientDataError",
    "PreconditionError",
    "allocation_table",
    "bijection_check",
    "claim_bounds",
    "compute_t",
    "construction_alpha",
    "feasibility_check",
    "min_baseline",
    "run_criterion",
    "simulate",
    "solve_milp",
    "theorem2_bound",
    "verify",
]


def _bound(d):
    out = dict(d)
    out["leading"] = Fraction(d["leading"])
    return out


def construction_alpha(c, nu):
    return Fraction(_core.construction_alpha(c, nu))


def min_baseline(c, nu):
    return Fraction(_core.min_baseline(c, nu))


def allocation_table(family, c, nu):
    """Table as a dict: ``entries`` maps a state tuple to ``{version: Fraction}``."""
    raw = json.loads(_core.allocation_table_json(family, c, nu))
    return {
        "nu": raw["nu"],
        "c": raw["c"],
        "family": raw["family"],
        "t": raw.get("t"),
        "alpha": Fraction(raw["alpha"]),
        "entries": {
            tuple(e["state"]): {int(v): Fraction(x) for v, x in e["alloc"].items()} for e in raw["entries"]
        },
        "json": _core.allocation_table_json(family, c, nu),
    }


def verify(family, n, c, nu, trials=3, seed=None):
    if seed is None:
        return _core.verify(family, n, c, nu, trials)
    return _core.verify(family, n, c, nu, trials, seed)


def theorem2_bound(c, nu, logm):
    return _bound(_core.theorem2_bound(c, nu, logm))


def solve_milp(c, nu, seed_with_construction=True):
    out = _core.solve_milp(c, nu, seed_with_construction)
    out["alpha"] = Fraction(out["alpha"])
    return out


def bijection_check(family, c, nu, m, n=0):
    return _core.bijection_check(family, c, nu, m, n)


def simulate(n, f, t, **kwargs):
    return _core.simulate(n, f, t, **kwargs)


def claim_bounds(n, f, t, logm):
    out = _core.claim_bounds(n, f, t, logm)
    if out["achievable"] is not None:
        out["achievable"] = Fraction(out["achievable"])
    if out["delay_lb"] is not None:
        out["delay_lb"] = _bound(out["delay_lb"])
    out["erasure_lb"] = _bound(out["erasure_lb"])
    return out
