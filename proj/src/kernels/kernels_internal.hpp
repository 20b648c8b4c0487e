#pragma once

#include "newtonosc/kernels.hpp"

namespace newtonosc::kernels::detail {

std::complex<double> oscillatory_sum_scalar(const double* nodes, const double* amps, std::size_t n,
                                            const double* coeffs, std::size_t ncoeffs);
void sincos_scalar(const double* x, std::size_t n, double* s, double* c);
void exp_scalar(const double* x, std::size_t n, double* y);
void evaluate_sparse_scalar(const double* coeffs, const int* exps, std::size_t terms, std::size_t d,
                            const double* pts, std::size_t n, double* out);

#if defined(NEWTONOSC_HAVE_AVX2)
std::complex<double> oscillatory_sum_avx2(const double* nodes, const double* amps, std::size_t n,
                                          const double* coeffs, std::size_t ncoeffs);
void sincos_avx2(const double* x, std::size_t n, double* s, double* c);
void exp_avx2(const double* x, std::size_t n, double* y);
void evaluate_sparse_avx2(const double* coeffs, const int* exps, std::size_t terms, std::size_t d,
                          const double* pts, std::size_t n, double* out);
#endif

}  // namespace newtonosc::kernels::detail
