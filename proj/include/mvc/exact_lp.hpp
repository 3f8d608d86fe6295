#pragma once

#include "mvc/rational.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mvc::lp {

struct Term {
  int var;
  Rational coef;
};

// sum(coef * x[var]) >= rhs
struct Row {
  std::vector<Term> terms;
  Rational rhs;
};

enum class Status { optimal, infeasible };

// Exact dense-tableau dual simplex for   min c.x  s.t.  rows (>=),  x >= 0,
// with c >= 0 so the all-surplus basis starts dual feasible. Rows can be
// appended after a solve; the next solve resumes from the current basis.
// Pivoting follows Bland's rule (lowest-index leaving row variable, lowest
// index among ratio ties).
class DualSimplex {
 public:
  explicit DualSimplex(std::vector<Rational> cost);

  int n_vars() const noexcept { return n_; }
  std::size_t n_rows() const noexcept { return rows_.size(); }
  const std::vector<Row>& rows() const noexcept { return rows_; }
  const std::vector<Rational>& cost() const noexcept { return cost_; }

  void add_row(Row row);
  Status solve();

  // valid after an optimal solve
  const Rational& value() const noexcept { return value_; }
  std::vector<Rational> primal() const;
  std::vector<Rational> duals() const;  // one per row, >= 0
  std::uint64_t pivots() const noexcept { return pivots_; }

 private:
  void pivot(std::size_t r, std::size_t j);

  int n_;
  std::vector<Rational> cost_;
  std::vector<Row> rows_;
  // tableau over columns [x_0..x_{n-1}, s_0..s_{m-1}]
  std::vector<std::vector<Rational>> tab_;
  std::vector<Rational> rhs_;
  std::vector<std::size_t> basis_;
  std::vector<Rational> reduced_;
  Rational value_ = 0;
  std::uint64_t pivots_ = 0;
};

// Independent optimality check: x feasible, y >= 0, A^T y <= c, c.x = b.y = value.
bool verify_certificate(const std::vector<Rational>& cost, const std::vector<Row>& rows,
                        const std::vector<Rational>& x, const std::vector<Rational>& y, const Rational& value,
                        std::string* why = nullptr);

}  // namespace mvc::lp
