#include "newtonosc/linalg.hpp"

#include <stdexcept>

namespace newtonosc {

RowEchelon row_reduce(RationalMatrix m, std::size_t columns) {
  RowEchelon out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < columns && row < m.size(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.size() && m[pivot][col] == 0) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[row], m[pivot]);
    const Rational inv = 1 / m[row][col];
    for (std::size_t c = col; c < columns; ++c) m[row][c] *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      const Rational f = m[r][col];
      for (std::size_t c = col; c < columns; ++c) m[r][c] -= f * m[row][c];
    }
    out.pivots.push_back(col);
    ++row;
  }
  m.resize(row);
  out.rows = std::move(m);
  return out;
}

std::size_t rank(const RationalMatrix& m, std::size_t columns) {
  return row_reduce(m, columns).pivots.size();
}

std::vector<RationalVector> nullspace(const RationalMatrix& m, std::size_t columns) {
  const RowEchelon e = row_reduce(m, columns);
  std::vector<bool> is_pivot(columns, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<RationalVector> basis;
  for (std::size_t free = 0; free < columns; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(columns, Rational(0));
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.rows[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RationalVector> solve_square(const RationalMatrix& a, const RationalVector& b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("solve_square: size mismatch");
  RationalMatrix aug = a;
  for (std::size_t i = 0; i < n; ++i) {
    if (aug[i].size() != n) throw std::invalid_argument("solve_square: matrix not square");
    aug[i].push_back(b[i]);
  }
  const RowEchelon e = row_reduce(std::move(aug), n + 1);
  if (e.pivots.size() != n || e.pivots.back() != n - 1) return std::nullopt;
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = e.rows[i][n];
  return x;
}

std::optional<RationalMatrix> inverse(const RationalMatrix& a) {
  const std::size_t n = a.size();
  RationalMatrix aug = a;
  for (std::size_t i = 0; i < n; ++i) {
    aug[i].resize(2 * n, Rational(0));
    aug[i][n + i] = 1;
  }
  const RowEchelon e = row_reduce(std::move(aug), 2 * n);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  RationalMatrix inv(n, RationalVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = e.rows[i][n + j];
  return inv;
}

int affine_dimension(const std::vector<RationalVector>& points) {
  if (points.empty()) return -1;
  const std::size_t d = points.front().size();
  RationalMatrix diffs;
  for (std::size_t i = 1; i < points.size(); ++i) {
    RationalVector row(d);
    for (std::size_t k = 0; k < d; ++k) row[k] = points[i][k] - points[0][k];
    diffs.push_back(std::move(row));
  }
  return static_cast<int>(rank(diffs, d));
}

}  // namespace newtonosc
