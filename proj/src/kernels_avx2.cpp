// AVX2 variants. This translation unit is compiled with -mavx2 and must only
// be reached after a runtime CPU check (see kernels_dispatch.cpp). Elementwise
// kernels mirror the scalar reference operation-for-operation so results are
// bit-identical; tails reuse the scalar bodies.

#if defined(EGOSIM_HAVE_AVX2)

#include <immintrin.h>

#include <bit>
#include <cstddef>
#include <cstdint>

#include "egosim/kernels.hpp"
#include "kernels_detail.hpp"

namespace egosim::kernels {
namespace {

using detail::dot_scalar;
using detail::ego_scalar;
using detail::hdi_scalar;
using detail::hpi_scalar;
using detail::intersect_count_scalar;
using detail::jaccard_scalar;
using detail::rss_scalar;
using detail::salton_scalar;
using detail::sum_scalar;

// ============================================================
// sorted u32 intersection, 8x8 blocks
// ============================================================

// Compares an 8-lane block of a against all 8 rotations of a b block.
// Values are strictly increasing within each input, so every a lane matches
// at most one b value and OR-ing the equality masks cannot double count.
std::size_t intersect_count_avx2(const std::uint32_t* a, std::size_t na,
                                 const std::uint32_t* b, std::size_t nb) {
  static const __m256i kRot[7] = {
      _mm256_setr_epi32(1, 2, 3, 4, 5, 6, 7, 0),
      _mm256_setr_epi32(2, 3, 4, 5, 6, 7, 0, 1),
      _mm256_setr_epi32(3, 4, 5, 6, 7, 0, 1, 2),
      _mm256_setr_epi32(4, 5, 6, 7, 0, 1, 2, 3),
      _mm256_setr_epi32(5, 6, 7, 0, 1, 2, 3, 4),
      _mm256_setr_epi32(6, 7, 0, 1, 2, 3, 4, 5),
      _mm256_setr_epi32(7, 0, 1, 2, 3, 4, 5, 6),
  };

  std::size_t i = 0, j = 0, count = 0;
  while (i + 8 <= na && j + 8 <= nb) {
    __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + j));
    __m256i eq = _mm256_cmpeq_epi32(va, vb);
    for (int r = 0; r < 7; ++r) {
      __m256i rot = _mm256_permutevar8x32_epi32(vb, kRot[r]);
      eq = _mm256_or_si256(eq, _mm256_cmpeq_epi32(va, rot));
    }
    unsigned mask =
        unsigned(_mm256_movemask_ps(_mm256_castsi256_ps(eq))) & 0xffu;
    count += std::popcount(mask);

    std::uint32_t amax = a[i + 7], bmax = b[j + 7];
    if (amax <= bmax) i += 8;
    if (bmax <= amax) j += 8;
  }
  return count + intersect_count_scalar(a + i, na - i, b + j, nb - j);
}

// ============================================================
// elementwise score kernels, 4 doubles per step
// ============================================================

void jaccard_avx2(const double* cn, const double* di, const double* dj,
                  double* out, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    __m256d c = _mm256_loadu_pd(cn + t);
    __m256d a = _mm256_loadu_pd(di + t);
    __m256d b = _mm256_loadu_pd(dj + t);
    __m256d den = _mm256_sub_pd(_mm256_add_pd(a, b), c);
    __m256d q = _mm256_div_pd(c, den);
    __m256d keep = _mm256_cmp_pd(den, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(out + t, _mm256_and_pd(q, keep));
  }
  jaccard_scalar(cn + t, di + t, dj + t, out + t, n - t);
}

void salton_avx2(const double* cn, const double* di, const double* dj,
                 double* out, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    __m256d c = _mm256_loadu_pd(cn + t);
    __m256d a = _mm256_loadu_pd(di + t);
    __m256d b = _mm256_loadu_pd(dj + t);
    __m256d prod = _mm256_mul_pd(a, b);
    __m256d q = _mm256_div_pd(c, _mm256_sqrt_pd(prod));
    __m256d keep = _mm256_cmp_pd(prod, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(out + t, _mm256_and_pd(q, keep));
  }
  salton_scalar(cn + t, di + t, dj + t, out + t, n - t);
}

void hpi_avx2(const double* cn, const double* di, const double* dj,
              double* out, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    __m256d c = _mm256_loadu_pd(cn + t);
    __m256d m = _mm256_min_pd(_mm256_loadu_pd(di + t), _mm256_loadu_pd(dj + t));
    __m256d q = _mm256_div_pd(c, m);
    __m256d keep = _mm256_cmp_pd(m, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(out + t, _mm256_and_pd(q, keep));
  }
  hpi_scalar(cn + t, di + t, dj + t, out + t, n - t);
}

void hdi_avx2(const double* cn, const double* di, const double* dj,
              double* out, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    __m256d c = _mm256_loadu_pd(cn + t);
    __m256d m = _mm256_max_pd(_mm256_loadu_pd(di + t), _mm256_loadu_pd(dj + t));
    __m256d q = _mm256_div_pd(c, m);
    __m256d keep = _mm256_cmp_pd(m, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(out + t, _mm256_and_pd(q, keep));
  }
  hdi_scalar(cn + t, di + t, dj + t, out + t, n - t);
}

void rss_avx2(const double* w, const double* si, const double* sj, double* out,
              std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    __m256d ww = _mm256_loadu_pd(w + t);
    __m256d qi = _mm256_div_pd(ww, _mm256_loadu_pd(si + t));
    __m256d qj = _mm256_div_pd(ww, _mm256_loadu_pd(sj + t));
    __m256d m = _mm256_max_pd(qi, qj);
    __m256d keep = _mm256_cmp_pd(ww, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(out + t, _mm256_and_pd(m, keep));
  }
  rss_scalar(w + t, si + t, sj + t, out + t, n - t);
}

void ego_avx2(const double* co, const double* deg_lo, const double* deg_hi,
              double node_count, double* out, std::size_t n) {
  const __m256d v = _mm256_set1_pd(node_count);
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    __m256d q = _mm256_div_pd(_mm256_loadu_pd(co + t),
                              _mm256_loadu_pd(deg_lo + t));
    q = _mm256_mul_pd(q, v);
    q = _mm256_div_pd(q, _mm256_loadu_pd(deg_hi + t));
    _mm256_storeu_pd(out + t, q);
  }
  ego_scalar(co + t, deg_lo + t, deg_hi + t, node_count, out + t, n - t);
}

// ============================================================
// reductions
// ============================================================

double hsum(__m256d acc) {
  double buf[4];
  _mm256_storeu_pd(buf, acc);
  return (buf[0] + buf[1]) + (buf[2] + buf[3]);
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + t));
  double s = hsum(acc);
  for (; t < n; ++t) s += x[t];
  return s;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    acc = _mm256_add_pd(
        acc, _mm256_mul_pd(_mm256_loadu_pd(x + t), _mm256_loadu_pd(y + t)));
  }
  double s = hsum(acc);
  for (; t < n; ++t) s += x[t] * y[t];
  return s;
}

}  // namespace

const Ops* avx2_ops_table() {
  static const Ops ops = {
      "avx2",       intersect_count_avx2,
      jaccard_avx2, salton_avx2,
      hpi_avx2,     hdi_avx2,
      rss_avx2,     ego_avx2,
      sum_avx2,     dot_avx2,
  };
  return &ops;
}

}  // namespace egosim::kernels

#endif  // EGOSIM_HAVE_AVX2
