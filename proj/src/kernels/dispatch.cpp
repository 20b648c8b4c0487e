#include "kernels_internal.hpp"

#include <cstdlib>
#include <string_view>

namespace newtonosc::kernels {

namespace {

const KernelTable kScalar{"scalar", detail::oscillatory_sum_scalar, detail::sincos_scalar, detail::exp_scalar,
                          detail::evaluate_sparse_scalar};

#if defined(NEWTONOSC_HAVE_AVX2)
const KernelTable kAvx2{"avx2", detail::oscillatory_sum_avx2, detail::sincos_avx2, detail::exp_avx2,
                        detail::evaluate_sparse_avx2};
#endif

const KernelTable& select() {
  const char* forced = std::getenv("NEWTONOSC_ISA");
  if (forced && std::string_view(forced) == "scalar") return kScalar;
  if (const KernelTable* t = avx2_table()) return *t;
  return kScalar;
}

}  // namespace

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() {
#if defined(NEWTONOSC_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace newtonosc::kernels
