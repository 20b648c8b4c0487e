// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
// sin/cos and exp follow the Cephes double-precision routines.
#include "kernels_internal.hpp"

#include <immintrin.h>

#include <cmath>

namespace newtonosc::kernels::detail {

namespace {

constexpr double kFourOverPi = 1.27323954473516268615;
constexpr double kDP1 = 7.85398125648498535156e-1;
constexpr double kDP2 = 3.77489470793079817668e-8;
constexpr double kDP3 = 2.69515142907905952645e-15;
constexpr double kSinCof[6] = {1.58962301576546568060e-10, -2.50507477628578072866e-8, 2.75573136213857245213e-6,
                               -1.98412698295895385996e-4, 8.33333333332211858878e-3, -1.66666666666666307295e-1};
constexpr double kCosCof[6] = {-1.13585365213876817300e-11, 2.08757008419747316778e-9, -2.75573141792967388112e-7,
                               2.48015872888517045348e-5, -1.38888888888730564116e-3, 4.16666666666665929218e-2};
// Beyond this the three-part reduction loses accuracy and the octant index overflows int32.
constexpr double kReductionLimit = 1.0e9;

constexpr double kExpP[3] = {1.26177193074810590878e-4, 3.02994407707441961300e-2, 9.99999999999999999910e-1};
constexpr double kExpQ[4] = {3.00198505138664455042e-6, 2.52448340349684104192e-3, 2.27265548208155028766e-1,
                             2.00000000000000000009e0};
constexpr double kExpC1 = 6.93145751953125e-1;
constexpr double kExpC2 = 1.42860682030941723212e-6;
constexpr double kLog2e = 1.4426950408889634073599;

inline __m256d abs_pd(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

inline __m256d poly6(__m256d z, const double* c) {
  __m256d p = _mm256_set1_pd(c[0]);
  for (int k = 1; k < 6; ++k) p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(c[k]));
  return p;
}

inline __m256d lanes_with_bit(__m128i j, int bit) {
  const __m128i b = _mm_and_si128(j, _mm_set1_epi32(bit));
  const __m256i wide = _mm256_cvtepi32_epi64(b);
  return _mm256_castsi256_pd(_mm256_cmpeq_epi64(wide, _mm256_set1_epi64x(bit)));
}

// Requires |x| <= kReductionLimit in every lane.
inline void sincos4(__m256d x, __m256d& s, __m256d& c) {
  const __m256d sign_bit = _mm256_set1_pd(-0.0);
  const __m256d ax = abs_pd(x);
  __m128i j = _mm256_cvttpd_epi32(_mm256_mul_pd(ax, _mm256_set1_pd(kFourOverPi)));
  j = _mm_and_si128(_mm_add_epi32(j, _mm_set1_epi32(1)), _mm_set1_epi32(~1));
  const __m256d y = _mm256_cvtepi32_pd(j);

  __m256d z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP1), ax);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP2), z);
  z = _mm256_fnmadd_pd(y, _mm256_set1_pd(kDP3), z);
  const __m256d zz = _mm256_mul_pd(z, z);

  const __m256d sin_poly = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), poly6(zz, kSinCof), z);
  const __m256d cos_poly = _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), poly6(zz, kCosCof),
                                           _mm256_fnmadd_pd(_mm256_set1_pd(0.5), zz, _mm256_set1_pd(1.0)));

  const __m256d swap = lanes_with_bit(j, 2);
  __m256d sv = _mm256_blendv_pd(sin_poly, cos_poly, swap);
  __m256d cv = _mm256_blendv_pd(cos_poly, sin_poly, swap);

  const __m256d sin_neg = _mm256_xor_pd(_mm256_and_pd(lanes_with_bit(j, 4), sign_bit), _mm256_and_pd(x, sign_bit));
  const __m128i jc = _mm_add_epi32(j, _mm_set1_epi32(2));
  const __m256d cos_neg = _mm256_and_pd(lanes_with_bit(jc, 4), sign_bit);
  s = _mm256_xor_pd(sv, sin_neg);
  c = _mm256_xor_pd(cv, cos_neg);
}

inline bool all_reducible(__m256d x) {
  const __m256d over = _mm256_cmp_pd(abs_pd(x), _mm256_set1_pd(kReductionLimit), _CMP_GT_OQ);
  return _mm256_movemask_pd(over) == 0;
}

inline void sincos4_checked(__m256d x, __m256d& s, __m256d& c) {
  if (all_reducible(x)) {
    sincos4(x, s, c);
    return;
  }
  alignas(32) double xs[4], ss[4], cs[4];
  _mm256_store_pd(xs, x);
  for (int l = 0; l < 4; ++l) {
    ss[l] = std::sin(xs[l]);
    cs[l] = std::cos(xs[l]);
  }
  s = _mm256_load_pd(ss);
  c = _mm256_load_pd(cs);
}

inline __m256d exp4(__m256d x) {
  const __m256d underflow = _mm256_cmp_pd(x, _mm256_set1_pd(-708.0), _CMP_LT_OQ);
  const __m256d xc = _mm256_max_pd(x, _mm256_set1_pd(-708.0));
  const __m256d px = _mm256_floor_pd(_mm256_fmadd_pd(_mm256_set1_pd(kLog2e), xc, _mm256_set1_pd(0.5)));
  __m256d r = _mm256_fnmadd_pd(px, _mm256_set1_pd(kExpC1), xc);
  r = _mm256_fnmadd_pd(px, _mm256_set1_pd(kExpC2), r);
  const __m256d rr = _mm256_mul_pd(r, r);
  __m256d p = _mm256_set1_pd(kExpP[0]);
  p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(kExpP[1]));
  p = _mm256_fmadd_pd(p, rr, _mm256_set1_pd(kExpP[2]));
  p = _mm256_mul_pd(p, r);
  __m256d q = _mm256_set1_pd(kExpQ[0]);
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(kExpQ[1]));
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(kExpQ[2]));
  q = _mm256_fmadd_pd(q, rr, _mm256_set1_pd(kExpQ[3]));
  __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));
  const __m128i n = _mm256_cvtpd_epi32(px);
  const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(n), _mm256_set1_epi64x(1023)), 52);
  e = _mm256_mul_pd(e, _mm256_castsi256_pd(bits));
  return _mm256_andnot_pd(underflow, e);
}

inline __m256d ipow4(__m256d x, int e) {
  __m256d r = _mm256_set1_pd(1.0);
  while (e > 0) {
    if (e & 1) r = _mm256_mul_pd(r, x);
    x = _mm256_mul_pd(x, x);
    e >>= 1;
  }
  return r;
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

std::complex<double> oscillatory_sum_avx2(const double* nodes, const double* amps, std::size_t n,
                                          const double* coeffs, std::size_t ncoeffs) {
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_loadu_pd(nodes + i);
    __m256d p = _mm256_setzero_pd();
    for (std::size_t k = ncoeffs; k-- > 0;) p = _mm256_fmadd_pd(p, t, _mm256_set1_pd(coeffs[k]));
    __m256d s, c;
    sincos4_checked(p, s, c);
    const __m256d a = _mm256_loadu_pd(amps + i);
    acc_re = _mm256_fmadd_pd(a, c, acc_re);
    acc_im = _mm256_fmadd_pd(a, s, acc_im);
  }
  std::complex<double> tail = oscillatory_sum_scalar(nodes + i, amps + i, n - i, coeffs, ncoeffs);
  return {hsum(acc_re) + tail.real(), hsum(acc_im) + tail.imag()};
}

void sincos_avx2(const double* x, std::size_t n, double* s, double* c) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d sv, cv;
    sincos4_checked(_mm256_loadu_pd(x + i), sv, cv);
    _mm256_storeu_pd(s + i, sv);
    _mm256_storeu_pd(c + i, cv);
  }
  sincos_scalar(x + i, n - i, s + i, c + i);
}

void exp_avx2(const double* x, std::size_t n, double* y) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(y + i, exp4(_mm256_loadu_pd(x + i)));
  exp_scalar(x + i, n - i, y + i);
}

void evaluate_sparse_avx2(const double* coeffs, const int* exps, std::size_t terms, std::size_t d,
                          const double* pts, std::size_t n, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t t = 0; t < terms; ++t) {
      __m256d v = _mm256_set1_pd(coeffs[t]);
      for (std::size_t k = 0; k < d; ++k) v = _mm256_mul_pd(v, ipow4(_mm256_loadu_pd(pts + k * n + i), exps[t * d + k]));
      acc = _mm256_add_pd(acc, v);
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t t = 0; t < terms; ++t) {
      double v = coeffs[t];
      for (std::size_t k = 0; k < d; ++k) {
        double x = pts[k * n + i], r = 1.0;
        for (int e = exps[t * d + k]; e > 0; e >>= 1) {
          if (e & 1) r *= x;
          x *= x;
        }
        v *= r;
      }
      acc += v;
    }
    out[i] = acc;
  }
}

}  // namespace newtonosc::kernels::detail
