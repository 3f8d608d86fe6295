#include "mvc/exact_lp.hpp"

#include "mvc/errors.hpp"

namespace mvc::lp {

DualSimplex::DualSimplex(std::vector<Rational> cost) : n_(static_cast<int>(cost.size())), cost_(std::move(cost)) {
  for (const auto& c : cost_)
    if (c < 0) throw PreconditionError("dual simplex needs a nonnegative cost vector");
  reduced_ = cost_;
}

void DualSimplex::add_row(Row row) {
  for (const auto& t : row.terms)
    if (t.var < 0 || t.var >= n_) throw PreconditionError("row references an unknown variable");

  const std::size_t width = reduced_.size() + 1;
  for (auto& r : tab_) r.emplace_back(0);
  reduced_.emplace_back(0);

  // -a.x + s = -b, then eliminate the current basic columns
  std::vector<Rational> fresh(width);
  for (const auto& t : row.terms) fresh[t.var] -= t.coef;
  fresh[width - 1] = 1;
  Rational b = -row.rhs;
  for (std::size_t i = 0; i < tab_.size(); ++i) {
    const Rational f = fresh[basis_[i]];
    if (f == 0) continue;
    for (std::size_t j = 0; j < width; ++j)
      if (tab_[i][j] != 0) fresh[j] -= f * tab_[i][j];
    b -= f * rhs_[i];
  }
  tab_.push_back(std::move(fresh));
  rhs_.push_back(std::move(b));
  basis_.push_back(width - 1);
  rows_.push_back(std::move(row));
}

void DualSimplex::pivot(std::size_t r, std::size_t j) {
  auto& prow = tab_[r];
  const Rational inv = 1 / prow[j];
  std::vector<std::size_t> nz;
  for (std::size_t k = 0; k < prow.size(); ++k) {
    if (prow[k] == 0) continue;
    prow[k] *= inv;
    nz.push_back(k);
  }
  rhs_[r] *= inv;
  for (std::size_t i = 0; i < tab_.size(); ++i) {
    if (i == r) continue;
    const Rational f = tab_[i][j];
    if (f == 0) continue;
    for (std::size_t k : nz) tab_[i][k] -= f * prow[k];
    rhs_[i] -= f * rhs_[r];
  }
  const Rational f = reduced_[j];
  if (f != 0) {
    for (std::size_t k : nz) reduced_[k] -= f * prow[k];
    value_ += f * rhs_[r];
  }
  basis_[r] = j;
  ++pivots_;
}

Status DualSimplex::solve() {
  while (true) {
    std::size_t leave = tab_.size();
    for (std::size_t i = 0; i < tab_.size(); ++i) {
      if (rhs_[i] < 0 && (leave == tab_.size() || basis_[i] < basis_[leave])) leave = i;
    }
    if (leave == tab_.size()) return Status::optimal;

    const auto& row = tab_[leave];
    std::size_t enter = row.size();
    Rational best;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] >= 0) continue;
      Rational ratio = reduced_[j] / -row[j];
      if (enter == row.size() || ratio < best) {
        enter = j;
        best = std::move(ratio);
      }
    }
    if (enter == row.size()) return Status::infeasible;
    pivot(leave, enter);
  }
}

std::vector<Rational> DualSimplex::primal() const {
  std::vector<Rational> x(n_);
  for (std::size_t i = 0; i < basis_.size(); ++i)
    if (basis_[i] < static_cast<std::size_t>(n_)) x[basis_[i]] = rhs_[i];
  return x;
}

std::vector<Rational> DualSimplex::duals() const {
  std::vector<Rational> y(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) y[i] = reduced_[n_ + i];
  return y;
}

bool verify_certificate(const std::vector<Rational>& cost, const std::vector<Row>& rows,
                        const std::vector<Rational>& x, const std::vector<Rational>& y, const Rational& value,
                        std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (x.size() != cost.size() || y.size() != rows.size()) return fail("dimension mismatch");
  Rational primal = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < 0) return fail("negative primal variable " + std::to_string(j));
    primal += cost[j] * x[j];
  }
  std::vector<Rational> aty(cost.size());
  Rational dual = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (y[i] < 0) return fail("negative dual for row " + std::to_string(i));
    Rational lhs = 0;
    for (const auto& t : rows[i].terms) {
      lhs += t.coef * x[t.var];
      aty[t.var] += t.coef * y[i];
    }
    if (lhs < rows[i].rhs) return fail("row " + std::to_string(i) + " violated");
    dual += rows[i].rhs * y[i];
  }
  for (std::size_t j = 0; j < cost.size(); ++j)
    if (aty[j] > cost[j]) return fail("dual constraint " + std::to_string(j) + " violated");
  if (primal != value || dual != value) return fail("primal and dual objectives differ");
  return true;
}

}  // namespace mvc::lp
