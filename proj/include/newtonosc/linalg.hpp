// Dense exact linear algebra over the rationals. Sizes here are tiny
// (dimension <= 6, a few dozen rows), so everything is plain Gaussian
// elimination on row-major vectors.
#pragma once

#include "newtonosc/rational.hpp"

#include <optional>
#include <vector>

namespace newtonosc {

using RationalMatrix = std::vector<RationalVector>;

struct RowEchelon {
  RationalMatrix rows;              // reduced row echelon form, zero rows dropped
  std::vector<std::size_t> pivots;  // pivot column of each row
};

RowEchelon row_reduce(RationalMatrix m, std::size_t columns);

std::size_t rank(const RationalMatrix& m, std::size_t columns);

/// Basis of {x : m x = 0}.
std::vector<RationalVector> nullspace(const RationalMatrix& m, std::size_t columns);

/// Unique solution of a square system, or nullopt when singular.
std::optional<RationalVector> solve_square(const RationalMatrix& a, const RationalVector& b);

std::optional<RationalMatrix> inverse(const RationalMatrix& a);

/// Affine rank of a point set (dimension of its affine hull); -1 when empty.
int affine_dimension(const std::vector<RationalVector>& points);

}  // namespace newtonosc
