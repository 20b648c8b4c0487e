#include "doctest.h"

#include "oracles/quadrature_oracle.hpp"

#include "newtonosc/oscint.hpp"
#include "newtonosc/phase.hpp"
#include "newtonosc/polytope.hpp"

#include <cmath>
#include <random>

using namespace newtonosc;

namespace {

PhasePolynomial ph(const char* t) { return parse_phase(t, 2); }

TestFunctionSpec ones(std::size_t d) { return TestFunctionSpec(d, TestFunction::constant(1.0)); }

CutoffSpec orthant_bump() {
  CutoffSpec c;
  c.orthant = true;
  return c;
}

}  // namespace

TEST_CASE("test functions") {
  const auto box = TestFunction::indicator(0.25, 0.75);
  CHECK(box(0.5).real() == 1.0);
  CHECK(box(0.8).real() == 0.0);
  CHECK(box.norm(LebesgueExponent::finite(2), 0.0, 1.0) == doctest::Approx(std::sqrt(0.5)));
  CHECK(box.norm(LebesgueExponent::infinity(), 0.0, 1.0) == 1.0);
  CHECK(box.norm(LebesgueExponent::infinity(), 0.8, 1.0) == 0.0);
  CHECK(box.sup(0.0, 1.0) == 1.0);
  const auto e = TestFunction::exponential(3.0);
  CHECK(std::abs(e(0.7) - std::polar(1.0, 2.1)) < 1e-15);
  CHECK(e.norm(LebesgueExponent::finite(4), 0.0, 16.0) == doctest::Approx(2.0));
  const auto t = TestFunction::table({0.0, 1.0, 2.0}, {0.0, 2.0, 0.0});
  CHECK(t.real_factor(0.5) == doctest::Approx(1.0));
  CHECK(t.sup(0.0, 2.0) == doctest::Approx(2.0));
  CHECK(t.real_factor(3.0) == 0.0);
  CHECK_THROWS(TestFunction::indicator(1.0, 0.0));
  CHECK_THROWS(TestFunction::table({1.0, 0.0}, {1.0, 1.0}));
}

TEST_CASE("lambda = 0 reproduces the cutoff mass") {
  for (bool orthant : {false, true}) {
    CutoffSpec chi;
    chi.orthant = orthant;
    const auto r = evaluate_lambda(ph("x1*x2"), ones(2), chi, 0.0);
    const double m = oracle::bump_mass_1d(1.0, orthant);
    CHECK(r.value.real() == doctest::Approx(m * m).epsilon(1e-10));
    CHECK(std::abs(r.value.imag()) < 1e-14);
  }
  CutoffSpec wide;
  wide.radius = 0.5;
  const auto r3 = evaluate_lambda(parse_phase("x1*x2*x3", 3), ones(3), wide, 0.0);
  const double m = oracle::bump_mass_1d(0.5, false);
  CHECK(r3.value.real() == doctest::Approx(m * m * m).epsilon(1e-10));
}

TEST_CASE("bilinear phase agrees with the nested composite reference") {
  for (double lambda : {8.0, 64.0, 200.0}) {
    const auto r = evaluate_lambda(ph("x1*x2"), ones(2), orthant_bump(), lambda);
    const auto ref = oracle::bilinear_orthant_reference(lambda);
    CHECK(std::abs(r.value - ref) <= 1e-8 * std::abs(ref));
    CHECK_FALSE(r.low_confidence);
  }
}

TEST_CASE("symmetric cutoff makes the bilinear form real") {
  for (double lambda : {10.0, 300.0, 5000.0}) {
    const auto r = evaluate_lambda(ph("x1*x2"), ones(2), CutoffSpec{}, lambda);
    CHECK(std::abs(r.value.imag()) <= std::max(r.error, 1e-12 * std::abs(r.value)));
  }
}

TEST_CASE("conjugation symmetry in lambda") {
  const auto p = ph("x1^2*x2^2 + x1^5*x2");
  const TestFunctionSpec f{TestFunction::indicator(-0.3, 0.9), TestFunction::table({-1, 0, 1}, {0.5, 1, 0.25})};
  for (double lambda : {5.0, 77.0, 900.0}) {
    const auto a = evaluate_lambda(p, f, CutoffSpec{}, lambda);
    const auto b = evaluate_lambda(p, f, CutoffSpec{}, -lambda);
    CHECK(std::abs(a.value - std::conj(b.value)) <= 1e-10 * std::abs(a.value) + a.error + b.error);
  }
}

TEST_CASE("linearity in each slot") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  const auto p = ph("x1^2*x2 + x1*x2^3");
  for (int it = 0; it < 6; ++it) {
    double a = u(rng), b = u(rng), c = u(rng);
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    const double lambda = 50.0 * (it + 1);
    const std::size_t slot = it % 2;
    auto with = [&](TestFunction g) {
      TestFunctionSpec f{TestFunction::indicator(-0.5, 0.7), TestFunction::constant(1.0)};
      f[slot] = g;
      return evaluate_lambda(p, f, CutoffSpec{}, lambda).value;
    };
    const auto whole = with(TestFunction::indicator(a, c));
    const auto parts = with(TestFunction::indicator(a, b)) + with(TestFunction::indicator(b, c));
    CHECK(std::abs(whole - parts) <= 1e-8 * std::max(std::abs(whole), 1e-6));
    const auto scaled = with(TestFunction::constant(2.5));
    const auto base = with(TestFunction::constant(1.0));
    CHECK(std::abs(scaled - 2.5 * base) <= 1e-8 * std::abs(scaled));
  }
}

TEST_CASE("one-dimensional modulations reduce to a shifted phase") {
  const auto p = ph("x1*x2");
  const TestFunctionSpec f{TestFunction::exponential(7.0), TestFunction::constant(1.0)};
  const auto a = evaluate_lambda(p, f, CutoffSpec{}, 40.0);
  const auto b = evaluate_lambda(parse_phase("x1*x2 + 7/40*x1", 2), ones(2), CutoffSpec{}, 40.0);
  CHECK(std::abs(a.value - b.value) <= 1e-9 * std::abs(a.value));
}

TEST_CASE("refinement changes values by less than the error estimate") {
  const auto lambdas = geometric_grid(64.0, 65536.0, 9);
  int ok = 0, total = 0;
  for (const char* t : {"x1*x2", "x1^2*x2^2 + x1^5*x2"}) {
    const auto p = ph(t);
    QuadratureOptions fine;
    fine.phase_step /= 2;
    fine.rel_tol /= 10;
    const auto a = lambda_sweep(p, ones(2), orthant_bump(), lambdas);
    const auto b = lambda_sweep(p, ones(2), orthant_bump(), lambdas, fine);
    for (std::size_t i = 0; i < a.size(); ++i) {
      ++total;
      ok += std::abs(std::abs(a[i].value) - std::abs(b[i].value)) <= a[i].error ? 1 : 0;
    }
  }
  CHECK(ok >= 0.95 * total);
}

TEST_CASE("sweeps") {
  CHECK(lambda_sweep(ph("x1*x2"), ones(2), CutoffSpec{}, {}).empty());
  CHECK_THROWS_AS(lambda_sweep(ph("x1*x2"), ones(2), CutoffSpec{}, {4.0, 2.0}), std::invalid_argument);
  const auto g = geometric_grid(64.0, 4096.0, 7);
  REQUIRE(g.size() == 7);
  CHECK(g.front() == 64.0);
  CHECK(g.back() == doctest::Approx(4096.0).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(128.0).epsilon(1e-14));
  const auto s = lambda_sweep(ph("x1*x2"), ones(2), orthant_bump(), g);
  REQUIRE(s.size() == 7);
  for (std::size_t i = 1; i < s.size(); ++i) {
    CHECK(s[i].lambda > s[i - 1].lambda);
    CHECK(std::abs(s[i].value) < std::abs(s[i - 1].value));
  }
  CHECK_THROWS(evaluate_lambda(parse_phase("x1*x2*x3*x4", 4), ones(4), CutoffSpec{}, 1.0));
}

TEST_CASE("per-box contributions add up") {
  QuadratureOptions o;
  o.boxes = true;
  const auto r = evaluate_lambda(ph("x1*x2"), ones(2), CutoffSpec{}, 100.0, o);
  REQUIRE_FALSE(r.boxes.empty());
  std::complex<double> s = 0.0;
  for (const auto& [k, v] : r.boxes) {
    CHECK(k.size() == 1);
    s += v;
  }
  CHECK(std::abs(s - r.value) <= 1e-9 * std::abs(r.value));
}

TEST_CASE("single-box bound") {
  const auto n = build_polyhedron(ph("x1*x2"));
  const auto q2 = ExponentQuery::parse("2", 2);
  const std::vector<double> norms{1.0, 1.0};
  for (int k = 0; k < 8; ++k) {
    const DyadicBox b({k, k});
    for (double lambda : {1.0, 64.0, 1e6}) {
      const double expect = std::min(std::pow(lambda, -0.5), std::ldexp(1.0, -k));
      CHECK(single_box_bound(n, b, q2, norms, lambda) == doctest::Approx(expect).epsilon(1e-14));
    }
  }
  const auto qi = ExponentQuery::all_infinite(2);
  const DyadicBox b({3, 1});
  CHECK(single_box_bound(n, b, qi, norms, 1.0, 2.0) == doctest::Approx(2.0 * 0.0625).epsilon(1e-14));
  const std::vector<double> half{0.5, 3.0};
  CHECK(single_box_bound(n, b, qi, half, 1.0) == doctest::Approx(1.5 * 0.0625).epsilon(1e-14));
}

TEST_CASE("certificate dominates measured values") {
  const auto p = ph("x1*x2");
  const auto n = build_polyhedron(p);
  const auto qi = ExponentQuery::all_infinite(2);
  for (double lambda : {2.0, 64.0, 4096.0}) {
    const auto r = evaluate_lambda(p, ones(2), orthant_bump(), lambda);
    const double c = certificate(n, qi, ones(2), orthant_bump(), lambda,
                                 CertificateOptions{kCalibratedCertificateConstant});
    CHECK(std::abs(r.value) <= c);
  }
  const double a = certificate(n, qi, ones(2), CutoffSpec{}, 64.0);
  const double b = certificate(n, qi, ones(2), orthant_bump(), 64.0);
  CHECK(a == doctest::Approx(4.0 * b).epsilon(1e-12));
  CutoffSpec big;
  big.radius = 2.0;
  CHECK_THROWS(certificate(n, qi, ones(2), big, 64.0));
}
