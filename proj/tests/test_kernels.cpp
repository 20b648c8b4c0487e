#include "doctest.h"

#include "newtonosc/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

using namespace newtonosc::kernels;

namespace {

std::vector<double> uniform(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

// Lengths exercise the vector body and every scalar tail length.
const std::size_t kLengths[] = {0, 1, 3, 4, 5, 7, 8, 33, 1000};

}  // namespace

TEST_CASE("scalar kernels match the standard library") {
  const auto& s = scalar_table();
  std::mt19937_64 rng(1);
  const auto x = uniform(rng, 257, -50.0, 50.0);
  std::vector<double> sn(x.size()), cs(x.size()), ex(x.size());
  s.sincos(x.data(), x.size(), sn.data(), cs.data());
  s.exp(x.data(), x.size(), ex.data());
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(sn[i] == std::sin(x[i]));
    CHECK(cs[i] == std::cos(x[i]));
    CHECK(ex[i] == std::exp(x[i]));
  }
  const double tiny[] = {-709.0, -1000.0};
  double out[2];
  s.exp(tiny, 2, out);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == 0.0);
}

TEST_CASE("AVX2 kernels agree with the scalar reference") {
  const KernelTable* v = avx2_table();
  if (!v) {
    MESSAGE("AVX2 variant unavailable on this machine; equivalence not exercised");
    return;
  }
  const auto& s = scalar_table();
  std::mt19937_64 rng(2);
  for (std::size_t n : kLengths) {
    for (double range : {1.0, 100.0, 1e5, 1e8}) {
      const auto x = uniform(rng, n, -range, range);
      std::vector<double> s1(n), c1(n), s2(n), c2(n);
      s.sincos(x.data(), n, s1.data(), c1.data());
      v->sincos(x.data(), n, s2.data(), c2.data());
      for (std::size_t i = 0; i < n; ++i) {
        const double tol = 4e-16 * std::max(1.0, std::abs(x[i]) * 1e-3) + 2e-16;
        CHECK(std::abs(s1[i] - s2[i]) <= tol);
        CHECK(std::abs(c1[i] - c2[i]) <= tol);
      }
    }
    const auto e = uniform(rng, n, -740.0, 700.0);
    std::vector<double> y1(n), y2(n);
    s.exp(e.data(), n, y1.data());
    v->exp(e.data(), n, y2.data());
    for (std::size_t i = 0; i < n; ++i) {
      if (y1[i] == 0.0) {
        CHECK(y2[i] == 0.0);
      } else {
        CHECK(std::abs(y1[i] - y2[i]) <= 4e-16 * std::abs(y1[i]) + 1e-300);
      }
    }
  }
  const double edges[] = {0.0, -0.0, M_PI / 4, -M_PI / 4, M_PI / 2, M_PI, 3 * M_PI / 2, 2 * M_PI, 1e9, -1e9, 2e9};
  double s1[11], c1[11], s2[11], c2[11];
  s.sincos(edges, 11, s1, c1);
  v->sincos(edges, 11, s2, c2);
  for (int i = 0; i < 11; ++i) {
    CHECK(std::abs(s1[i] - s2[i]) <= 1e-15 * std::max(1.0, std::abs(edges[i]) * 1e-6));
    CHECK(std::abs(c1[i] - c2[i]) <= 1e-15 * std::max(1.0, std::abs(edges[i]) * 1e-6));
  }
}

TEST_CASE("AVX2 oscillatory sum and sparse evaluation agree with the scalar reference") {
  const KernelTable* v = avx2_table();
  if (!v) return;
  const auto& s = scalar_table();
  std::mt19937_64 rng(3);
  for (std::size_t n : kLengths) {
    const auto t = uniform(rng, n, -1.0, 1.0);
    const auto a = uniform(rng, n, 0.0, 1.0);
    for (std::size_t nc : {1u, 2u, 4u, 9u}) {
      const auto c = uniform(rng, nc, -500.0, 500.0);
      const auto z1 = s.oscillatory_sum(t.data(), a.data(), n, c.data(), nc);
      const auto z2 = v->oscillatory_sum(t.data(), a.data(), n, c.data(), nc);
      double mass = 0.0;
      for (double w : a) mass += w;
      CHECK(std::abs(z1 - z2) <= 1e-13 * std::max(mass, 1.0));
    }
    const std::size_t d = 3, terms = 4;
    const auto coeffs = uniform(rng, terms, -3.0, 3.0);
    std::uniform_int_distribution<int> e(0, 7);
    std::vector<int> exps(terms * d);
    for (auto& x : exps) x = e(rng);
    const auto pts = uniform(rng, n * d, -1.5, 1.5);
    std::vector<double> o1(n), o2(n);
    s.evaluate_sparse(coeffs.data(), exps.data(), terms, d, pts.data(), n, o1.data());
    v->evaluate_sparse(coeffs.data(), exps.data(), terms, d, pts.data(), n, o2.data());
    for (std::size_t i = 0; i < n; ++i) {
      double scale = 0.0;
      for (std::size_t tt = 0; tt < terms; ++tt) {
        double m = std::abs(coeffs[tt]);
        for (std::size_t k = 0; k < d; ++k) m *= std::pow(std::abs(pts[k * n + i]), exps[tt * d + k]);
        scale += m;
      }
      CHECK(std::abs(o1[i] - o2[i]) <= 1e-14 * std::max(scale, 1e-300));
    }
  }
}

TEST_CASE("dispatch honours the environment override") {
  const char* isa = std::getenv("NEWTONOSC_ISA");
  if (isa && std::string(isa) == "scalar") {
    CHECK(active().name == scalar_table().name);
  } else if (avx2_table()) {
    CHECK(active().name == avx2_table()->name);
  } else {
    CHECK(active().name == scalar_table().name);
  }
}
