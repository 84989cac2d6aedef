#pragma once

#include <cstddef>
#include <cstdint>

// Batched compute kernels with a scalar reference implementation and an AVX2
// variant selected at runtime. Integer counts arrive as doubles (exact below
// 2^53). Elementwise kernels use only correctly rounded per-lane operations
// in a fixed order, so every variant must produce bit-identical output; the
// reductions (sum/dot) may reassociate and are only equivalent to ~1e-12.
// The kernel targets are built with -ffp-contract=off to keep the scalar
// reference free of FMA contraction.

namespace egosim::kernels {

struct Ops {
  const char* name;

  // |a ∩ b| for strictly increasing u32 sequences (e.g. adjacency rows).
  std::size_t (*intersect_count)(const std::uint32_t* a, std::size_t na,
                                 const std::uint32_t* b, std::size_t nb);

  // out = cn / (di + dj - cn); 0 where the union is empty
  void (*jaccard)(const double* cn, const double* di, const double* dj,
                  double* out, std::size_t n);
  // out = cn / sqrt(di * dj); 0 where either degree is 0
  void (*salton)(const double* cn, const double* di, const double* dj,
                 double* out, std::size_t n);
  // out = cn / min(di, dj); 0 where min is 0
  void (*hpi)(const double* cn, const double* di, const double* dj,
              double* out, std::size_t n);
  // out = cn / max(di, dj); 0 where max is 0
  void (*hdi)(const double* cn, const double* di, const double* dj,
              double* out, std::size_t n);
  // out = max(w/si, w/sj); 0 where w is 0. Requires si,sj >= w.
  void (*rss)(const double* w, const double* si, const double* sj, double* out,
              std::size_t n);
  // out = ((co / deg_lo) * node_count) / deg_hi. Requires degrees >= 1.
  // The two divisions happen in exactly this order; callers rely on the
  // first quotient matching the coupling value bit-for-bit.
  void (*ego)(const double* co, const double* deg_lo, const double* deg_hi,
              double node_count, double* out, std::size_t n);

  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
};

const Ops& scalar();

// AVX2 variant, or nullptr when not compiled in / not supported by the CPU.
const Ops* avx2();

// Best available variant (AVX2 when present, otherwise scalar), unless
// overridden. Selection is stable for the lifetime of the process.
const Ops& active();

// Force a specific variant (tests, --no-simd). nullptr restores autodetect.
void override_active(const Ops* ops);

}  // namespace egosim::kernels
