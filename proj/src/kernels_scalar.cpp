#include <algorithm>
#include <cmath>

#include "egosim/kernels.hpp"

namespace egosim::kernels {
namespace detail {

// Shared by the scalar Ops table and by the vector variants' tail loops, so
// remainders are handled by literally the same code as the reference.

std::size_t intersect_count_scalar(const std::uint32_t* a, std::size_t na,
                                   const std::uint32_t* b, std::size_t nb) {
  std::size_t i = 0, j = 0, count = 0;
  while (i < na && j < nb) {
    std::uint32_t x = a[i], y = b[j];
    count += (x == y);
    i += (x <= y);
    j += (y <= x);
  }
  return count;
}

void jaccard_scalar(const double* cn, const double* di, const double* dj,
                    double* out, std::size_t n) {
  for (std::size_t t = 0; t < n; ++t) {
    double den = (di[t] + dj[t]) - cn[t];
    out[t] = den > 0.0 ? cn[t] / den : 0.0;
  }
}

void salton_scalar(const double* cn, const double* di, const double* dj,
                   double* out, std::size_t n) {
  for (std::size_t t = 0; t < n; ++t) {
    double prod = di[t] * dj[t];
    out[t] = prod > 0.0 ? cn[t] / std::sqrt(prod) : 0.0;
  }
}

void hpi_scalar(const double* cn, const double* di, const double* dj,
                double* out, std::size_t n) {
  for (std::size_t t = 0; t < n; ++t) {
    double m = di[t] < dj[t] ? di[t] : dj[t];
    out[t] = m > 0.0 ? cn[t] / m : 0.0;
  }
}

void hdi_scalar(const double* cn, const double* di, const double* dj,
                double* out, std::size_t n) {
  for (std::size_t t = 0; t < n; ++t) {
    double m = di[t] > dj[t] ? di[t] : dj[t];
    out[t] = m > 0.0 ? cn[t] / m : 0.0;
  }
}

void rss_scalar(const double* w, const double* si, const double* sj,
                double* out, std::size_t n) {
  for (std::size_t t = 0; t < n; ++t) {
    if (w[t] > 0.0) {
      double qi = w[t] / si[t];
      double qj = w[t] / sj[t];
      out[t] = qi > qj ? qi : qj;
    } else {
      out[t] = 0.0;
    }
  }
}

void ego_scalar(const double* co, const double* deg_lo, const double* deg_hi,
                double node_count, double* out, std::size_t n) {
  for (std::size_t t = 0; t < n; ++t) {
    out[t] = ((co[t] / deg_lo[t]) * node_count) / deg_hi[t];
  }
}

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t t = 0; t < n; ++t) acc += x[t];
  return acc;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t t = 0; t < n; ++t) acc += x[t] * y[t];
  return acc;
}

}  // namespace detail

const Ops& scalar() {
  static const Ops ops = {
      "scalar",
      detail::intersect_count_scalar,
      detail::jaccard_scalar,
      detail::salton_scalar,
      detail::hpi_scalar,
      detail::hdi_scalar,
      detail::rss_scalar,
      detail::ego_scalar,
      detail::sum_scalar,
      detail::dot_scalar,
  };
  return ops;
}

}  // namespace egosim::kernels
