#include "newtonosc/lp.hpp"

#include <stdexcept>

namespace newtonosc {

namespace {

class Tableau {
 public:
  Tableau(RationalMatrix rows, std::vector<std::size_t> basis, std::size_t columns)
      : rows_(std::move(rows)), basis_(std::move(basis)), columns_(columns) {}

  // Runs simplex iterations for `cost` over columns where `allowed[j]` holds.
  LpStatus optimize(const RationalVector& cost, const std::vector<bool>& allowed) {
    for (;;) {
      std::size_t entering = columns_;
      for (std::size_t j = 0; j < columns_; ++j) {
        if (!allowed[j] || is_basic(j)) continue;
        if (reduced_cost(cost, j) < 0) {
          entering = j;
          break;
        }
      }
      if (entering == columns_) return LpStatus::optimal;
      std::size_t leaving = rows_.size();
      Rational best_ratio;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (rows_[i][entering] <= 0) continue;
        Rational ratio = rows_[i][columns_] / rows_[i][entering];
        if (leaving == rows_.size() || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leaving])) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (leaving == rows_.size()) return LpStatus::unbounded;
      pivot(leaving, entering);
    }
  }

  void pivot(std::size_t row, std::size_t col) {
    const Rational inv = 1 / rows_[row][col];
    for (auto& v : rows_[row]) v *= inv;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      if (r == row || rows_[r][col] == 0) continue;
      const Rational f = rows_[r][col];
      for (std::size_t c = 0; c <= columns_; ++c) rows_[r][c] -= f * rows_[row][c];
    }
    basis_[row] = col;
  }

  Rational objective(const RationalVector& cost) const {
    Rational z = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i) z += cost[basis_[i]] * rows_[i][columns_];
    return z;
  }

  RationalVector solution(std::size_t n) const {
    RationalVector x(n, Rational(0));
    for (std::size_t i = 0; i < rows_.size(); ++i)
      if (basis_[i] < n) x[basis_[i]] = rows_[i][columns_];
    return x;
  }

  // Removes artificial variables (index >= n) from the basis; drops redundant rows.
  void expel_artificials(std::size_t n) {
    for (std::size_t i = 0; i < rows_.size();) {
      if (basis_[i] < n) {
        ++i;
        continue;
      }
      std::size_t col = n;
      for (std::size_t j = 0; j < n; ++j) {
        if (rows_[i][j] != 0) {
          col = j;
          break;
        }
      }
      if (col == n) {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        pivot(i, col);
        ++i;
      }
    }
  }

 private:
  bool is_basic(std::size_t j) const {
    for (auto b : basis_)
      if (b == j) return true;
    return false;
  }

  Rational reduced_cost(const RationalVector& cost, std::size_t j) const {
    Rational r = cost[j];
    for (std::size_t i = 0; i < rows_.size(); ++i) r -= cost[basis_[i]] * rows_[i][j];
    return r;
  }

  RationalMatrix rows_;  // each row: coefficients then rhs
  std::vector<std::size_t> basis_;
  std::size_t columns_;
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const std::size_t m = lp.a.size();
  const std::size_t n = lp.c.size();
  if (lp.b.size() != m) throw std::invalid_argument("solve_lp: rhs size mismatch");
  for (const auto& row : lp.a)
    if (row.size() != n) throw std::invalid_argument("solve_lp: row size mismatch");

  const std::size_t columns = n + m;
  RationalMatrix rows(m, RationalVector(columns + 1, Rational(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = lp.b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = flip ? Rational(-lp.a[i][j]) : lp.a[i][j];
    rows[i][columns] = flip ? Rational(-lp.b[i]) : lp.b[i];
    rows[i][n + i] = 1;
    basis[i] = n + i;
  }
  Tableau t(std::move(rows), std::move(basis), columns);

  RationalVector phase1(columns, Rational(0));
  for (std::size_t j = n; j < columns; ++j) phase1[j] = 1;
  std::vector<bool> all(columns, true);
  t.optimize(phase1, all);
  LpResult result;
  if (t.objective(phase1) != 0) {
    result.status = LpStatus::infeasible;
    return result;
  }
  t.expel_artificials(n);

  RationalVector phase2(columns, Rational(0));
  for (std::size_t j = 0; j < n; ++j) phase2[j] = lp.c[j];
  std::vector<bool> original(columns, false);
  for (std::size_t j = 0; j < n; ++j) original[j] = true;
  result.status = t.optimize(phase2, original);
  if (result.status == LpStatus::optimal) {
    result.x = t.solution(n);
    result.objective = t.objective(phase2);
  }
  return result;
}

std::optional<RationalVector> find_feasible_point(const RationalMatrix& a, const RationalVector& b) {
  const std::size_t n = a.empty() ? 0 : a.front().size();
  LinearProgram lp{a, b, RationalVector(n, Rational(0))};
  auto r = solve_lp(lp);
  if (r.status != LpStatus::optimal) return std::nullopt;
  return r.x;
}

}  // namespace newtonosc
