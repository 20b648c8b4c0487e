#include "doctest.h"

#include "newtonosc/linalg.hpp"
#include "newtonosc/lp.hpp"
#include "newtonosc/rational.hpp"

#include <random>

using namespace newtonosc;

TEST_CASE("rational helpers") {
  CHECK(parse_rational("-3/6") == Rational(-1, 2));
  CHECK(parse_rational("4") == 4);
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("x"));
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(primitive_integer_vector({Rational(1, 2), Rational(3, 4), 0}) == RationalVector{2, 3, 0});
  CHECK(simplest_rational_between(Rational(1, 3) - Rational(1, 1000), Rational(1, 3) + Rational(1, 1000)) ==
        Rational(1, 3));
  CHECK(simplest_rational_between(Rational(2), Rational(5, 2)) == 2);
  CHECK(from_double(0.375) == Rational(3, 8));
}

TEST_CASE("rank, nullspace and inverse") {
  RationalMatrix m{{1, 2, 3}, {2, 4, 6}, {1, 0, 1}};
  CHECK(rank(m, 3) == 2);
  const auto ns = nullspace(m, 3);
  REQUIRE(ns.size() == 1);
  for (const auto& row : m) CHECK(dot(row, ns[0]) == 0);
  CHECK_FALSE(inverse(m).has_value());

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> e(-5, 5);
  for (int it = 0; it < 50; ++it) {
    RationalMatrix a(3, RationalVector(3));
    for (auto& r : a)
      for (auto& x : r) x = e(rng);
    const auto inv = inverse(a);
    if (rank(a, 3) < 3) {
      CHECK_FALSE(inv.has_value());
      continue;
    }
    REQUIRE(inv.has_value());
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        Rational s = 0;
        for (std::size_t k = 0; k < 3; ++k) s += a[i][k] * (*inv)[k][j];
        CHECK(s == (i == j ? 1 : 0));
      }
    }
  }
  CHECK(affine_dimension({{0, 0}, {1, 1}, {2, 2}}) == 1);
  CHECK(affine_dimension({{0, 0}}) == 0);
}

TEST_CASE("simplex on small programs") {
  // min -x - y  s.t.  x + 2y + s1 = 4, 3x + y + s2 = 6
  LinearProgram lp{{{1, 2, 1, 0}, {3, 1, 0, 1}}, {4, 6}, {-1, -1, 0, 0}};
  const auto r = solve_lp(lp);
  REQUIRE(r.status == LpStatus::optimal);
  CHECK(r.objective == Rational(-14, 5));
  CHECK(r.x[0] == Rational(8, 5));
  CHECK(r.x[1] == Rational(6, 5));

  LinearProgram infeasible{{{1, 1}}, {-1}, {0, 0}};
  CHECK(solve_lp(infeasible).status == LpStatus::infeasible);

  LinearProgram unbounded{{{1, -1}}, {0}, {-1, 0}};
  CHECK(solve_lp(unbounded).status == LpStatus::unbounded);

  // redundant equality rows
  LinearProgram redundant{{{1, 1}, {2, 2}}, {1, 2}, {1, 0}};
  const auto rr = solve_lp(redundant);
  REQUIRE(rr.status == LpStatus::optimal);
  CHECK(rr.objective == 0);
}

TEST_CASE("feasible points satisfy the system exactly") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> e(-3, 4);
  for (int it = 0; it < 100; ++it) {
    RationalMatrix a(2, RationalVector(4));
    RationalVector b(2);
    for (auto& r : a)
      for (auto& x : r) x = e(rng);
    for (auto& x : b) x = e(rng);
    const auto x = find_feasible_point(a, b);
    if (!x) continue;
    for (const auto& v : *x) CHECK(v >= 0);
    for (std::size_t i = 0; i < 2; ++i) CHECK(dot(a[i], *x) == b[i]);
  }
}
