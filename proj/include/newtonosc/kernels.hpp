// Hot numeric loops with a scalar reference and an AVX2+FMA variant chosen at runtime.
// Both variants compute the same quantities; they agree to rounding, not bitwise.
#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace newtonosc::kernels {

struct KernelTable {
  std::string_view name;
  /// sum_i amps[i] * exp(i * P(nodes[i])) with P(t) = sum_k coeffs[k] t^k.
  std::complex<double> (*oscillatory_sum)(const double* nodes, const double* amps, std::size_t n,
                                          const double* coeffs, std::size_t ncoeffs);
  void (*sincos)(const double* x, std::size_t n, double* s, double* c);
  /// exp(x); exactly 0 below -708.
  void (*exp)(const double* x, std::size_t n, double* y);
  /// out[i] = sum_t coeffs[t] * prod_k pts[k*n + i]^exps[t*d + k].
  void (*evaluate_sparse)(const double* coeffs, const int* exps, std::size_t terms, std::size_t d,
                          const double* pts, std::size_t n, double* out);
};

const KernelTable& scalar_table();

/// nullptr when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

/// Table used by the library: AVX2 when available unless NEWTONOSC_ISA=scalar is set.
const KernelTable& active();

}  // namespace newtonosc::kernels
