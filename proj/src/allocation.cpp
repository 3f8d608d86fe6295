#include "mvc/allocation.hpp"

#include "mvc/errors.hpp"

#include <algorithm>

namespace mvc {

std::string to_string(TableFamily family) {
  switch (family) {
    case TableFamily::construction: return "construction";
    case TableFamily::replication: return "replication";
    case TableFamily::simple_mds: return "mds";
    case TableFamily::optimized: return "optimized";
    case TableFamily::custom: return "custom";
  }
  return "custom";
}

TableFamily parse_family(const std::string& name) {
  if (name == "construction") return TableFamily::construction;
  if (name == "replication") return TableFamily::replication;
  if (name == "mds" || name == "simple-mds" || name == "simple_mds") return TableFamily::simple_mds;
  if (name == "optimized") return TableFamily::optimized;
  if (name == "custom") return TableFamily::custom;
  throw PreconditionError("unknown table family: " + name);
}

namespace {

void check_params(int c, int nu) {
  if (c < 1) throw PreconditionError("quorum c must be at least 1");
  if (nu < 1 || nu > kMaxVersions) throw PreconditionError("version count must be in [1, 16]");
}

}  // namespace

AllocationTable::AllocationTable(int nu, int c, TableFamily family)
    : nu_(nu), c_(c), family_(family), entries_(static_cast<std::size_t>(nu) << nu) {
  check_params(c, nu);
}

std::size_t AllocationTable::slot(VersionSet state, int v) const {
  if (state.empty() || !state.subset_of(VersionSet::full(nu_))) {
    throw PreconditionError("state " + state.to_string() + " is not a nonempty subset of [" +
                            std::to_string(nu_) + "]");
  }
  return std::size_t{state.mask()} * static_cast<std::size_t>(nu_) + static_cast<std::size_t>(v - 1);
}

const Rational& AllocationTable::at(VersionSet state, int v) const {
  static const Rational zero(0);
  if (!state.contains(v)) {
    slot(state, 1);
    return zero;
  }
  return entries_[slot(state, v)];
}

void AllocationTable::set(VersionSet state, int v, const Rational& value) {
  if (!state.contains(v)) {
    throw PreconditionError("version " + std::to_string(v) + " not held in state " + state.to_string());
  }
  entries_[slot(state, v)] = value;
}

Rational AllocationTable::state_total(VersionSet state) const {
  Rational total = 0;
  for (int v : state.members()) total += at(state, v);
  return total;
}

void AllocationTable::validate() const {
  if (alpha_ < 0) throw PreconditionError("negative storage cost");
  for (VersionSet s : states()) {
    for (int v : s.members()) {
      if (at(s, v) < 0) {
        throw PreconditionError("negative allocation for version " + std::to_string(v) + " in state " +
                                s.to_string());
      }
    }
    if (state_total(s) > alpha_) {
      throw PreconditionError("state " + s.to_string() + " stores " + mvc::to_string(state_total(s)) +
                              " > alpha = " + mvc::to_string(alpha_));
    }
  }
}

bool AllocationTable::operator==(const AllocationTable& o) const {
  return nu_ == o.nu_ && c_ == o.c_ && alpha_ == o.alpha_ && entries_ == o.entries_;
}

int compute_t(int c, int nu) {
  check_params(c, nu);
  const std::int64_t cc = c;
  const std::int64_t n = nu;
  if (cc > (n - 1) * (n - 1)) return static_cast<int>(ceil_div(cc - 1, n) + 1);
  // c <= (nu-1)^2 with c >= 1 forces nu >= 2
  return static_cast<int>(ceil_div(cc, n - 1));
}

Rational construction_alpha(int c, int nu) {
  const int t = compute_t(c, nu);
  const Rational a(nu * t - nu + 1, t * c);
  const Rational b(1, t);
  return std::max(a, b);
}

AllocationTable build_construction_table(int c, int nu) {
  AllocationTable table(nu, c, TableFamily::construction);
  const int t = compute_t(c, nu);
  const Rational alpha = construction_alpha(c, nu);
  const Rational share(1, t);
  table.set_alpha(alpha);
  table.set_t(t);
  for (VersionSet s : table.states()) {
    const int j = s.latest();
    if (j == 1) {
      table.set(s, 1, alpha);
      continue;
    }
    table.set(s, j, share);
    if (s.contains(1)) table.set(s, 1, alpha - share);
  }
  table.validate();
  return table;
}

AllocationTable build_replication_table(int nu, int c) {
  AllocationTable table(nu, c, TableFamily::replication);
  table.set_alpha(1);
  for (VersionSet s : table.states()) table.set(s, s.latest(), 1);
  table.validate();
  return table;
}

AllocationTable build_simple_mds_table(int c, int nu) {
  AllocationTable table(nu, c, TableFamily::simple_mds);
  table.set_alpha(Rational(nu, c));
  for (VersionSet s : table.states())
    for (int v : s.members()) table.set(s, v, Rational(1, c));
  table.validate();
  return table;
}

Rational min_baseline(int c, int nu) {
  check_params(c, nu);
  return std::min(Rational(1), Rational(nu, c));
}

AllocationTable build_table(TableFamily family, int c, int nu) {
  switch (family) {
    case TableFamily::construction: return build_construction_table(c, nu);
    case TableFamily::replication: return build_replication_table(nu, c);
    case TableFamily::simple_mds: return build_simple_mds_table(c, nu);
    default: break;
  }
  throw PreconditionError("family " + to_string(family) + " has no generator");
}

}  // namespace mvc
