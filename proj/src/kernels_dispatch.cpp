#include "egosim/kernels.hpp"

namespace egosim::kernels {

#if defined(EGOSIM_HAVE_AVX2)
const Ops* avx2_ops_table();
#endif

const Ops* avx2() {
#if defined(EGOSIM_HAVE_AVX2)
  static const Ops* ops =
      __builtin_cpu_supports("avx2") ? avx2_ops_table() : nullptr;
  return ops;
#else
  return nullptr;
#endif
}

namespace {
const Ops* g_override = nullptr;
}

void override_active(const Ops* ops) { g_override = ops; }

const Ops& active() {
  if (g_override) return *g_override;
  if (const Ops* v = avx2()) return *v;
  return scalar();
}

}  // namespace egosim::kernels
