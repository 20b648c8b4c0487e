#include "kernels_internal.hpp"

#include <cmath>

namespace newtonosc::kernels::detail {

namespace {

double ipow(double x, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

}  // namespace

std::complex<double> oscillatory_sum_scalar(const double* nodes, const double* amps, std::size_t n,
                                            const double* coeffs, std::size_t ncoeffs) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = nodes[i];
    double p = 0.0;
    for (std::size_t k = ncoeffs; k-- > 0;) p = p * t + coeffs[k];
    re += amps[i] * std::cos(p);
    im += amps[i] * std::sin(p);
  }
  return {re, im};
}

void sincos_scalar(const double* x, std::size_t n, double* s, double* c) {
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = std::sin(x[i]);
    c[i] = std::cos(x[i]);
  }
}

void exp_scalar(const double* x, std::size_t n, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] < -708.0 ? 0.0 : std::exp(x[i]);
}

void evaluate_sparse_scalar(const double* coeffs, const int* exps, std::size_t terms, std::size_t d,
                            const double* pts, std::size_t n, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t t = 0; t < terms; ++t) {
      double v = coeffs[t];
      for (std::size_t k = 0; k < d; ++k) v *= ipow(pts[k * n + i], exps[t * d + k]);
      acc += v;
    }
    out[i] = acc;
  }
}

}  // namespace newtonosc::kernels::detail
