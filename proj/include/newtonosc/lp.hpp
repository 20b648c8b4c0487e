// Exact rational simplex for small standard-form programs
//   minimize c^T x  subject to  A x = b,  x >= 0.
// Two-phase method with Bland's rule; no cycling, no tolerances.
#pragma once

#include "newtonosc/linalg.hpp"

namespace newtonosc {

struct LinearProgram {
  RationalMatrix a;
  RationalVector b;
  RationalVector c;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  Rational objective;
  RationalVector x;
};

LpResult solve_lp(const LinearProgram& lp);

/// Feasibility of A x = b, x >= 0. Returns a witness point when feasible.
std::optional<RationalVector> find_feasible_point(const RationalMatrix& a, const RationalVector& b);

}  // namespace newtonosc
