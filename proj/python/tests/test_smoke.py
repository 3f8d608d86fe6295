import math
from fractions import Fraction

import pytest

import mvcode


def test_construction_costs():
    assert mvcode.construction_alpha(2, 2) == Fraction(3, 4)
    assert mvcode.construction_alpha(5, 3) == Fraction(7, 15)
    assert mvcode.construction_alpha(7, 3) == Fraction(1, 3)
    assert mvcode.min_baseline(10, 5) == Fraction(1, 2)
    assert mvcode.compute_t(7, 3) == 3


def test_table_entries():
    t = mvcode.allocation_table("construction", 2, 2)
    assert t["alpha"] == Fraction(3, 4)
    assert t["entries"][(1, 2)] == {1: Fraction(1, 4), 2: Fraction(1, 2)}
    assert mvcode.feasibility_check(t["json"]) is None


def test_verify_and_fault():
    assert mvcode.verify("construction", 3, 2, 2)["ok"]
    stale = mvcode.verify("stale", 3, 2, 2)
    assert not stale["ok"]
    assert stale["violation"]["reason"] == "version-too-old"


def test_bound():
    b = mvcode.theorem2_bound(7, 3, 128)
    assert b["leading"] == Fraction(1, 3)
    assert b["value"] == pytest.approx(1 / 3 - math.log2(2268) / 1152, abs=1e-12)


def test_optimizer():
    r = mvcode.solve_milp(2, 2)
    assert r["alpha"] == Fraction(3, 4)
    assert r["certificates"] >= 1


def test_converse():
    r = mvcode.bijection_check("construction", 2, 2, 3)
    assert r["ok"] and r["tuples"] == 6
    assert mvcode.bijection_check("stale", 2, 2, 3)["contract_error"]


def test_simulator():
    r = mvcode.simulate(5, 1, 3, logm=12, horizon=5, mode="exhaustive")
    assert r["ok"]
    assert r["max_storage_bits"] == 9
    b = mvcode.claim_bounds(5, 1, 3, 128)
    assert b["achievable"] == Fraction(1, 2)
    assert b["delay_lb"]["leading"] == Fraction(2, 5)


def test_errors():
    with pytest.raises(mvcode.PreconditionError):
        mvcode.verify("construction", 2, 3, 2)
    with pytest.raises(mvcode.ConfigurationError):
        mvcode.simulate(5, 1, 2)
    with pytest.raises(mvcode.Error):
        mvcode.bijection_check("construction", 2, 2, 1000)


def test_acceptance_criterion():
    r = mvcode.run_criterion(1)
    assert r["pass"], r["detail"]
