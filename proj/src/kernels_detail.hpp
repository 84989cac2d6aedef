#pragma once

#include <cstddef>
#include <cstdint>

// Scalar reference bodies, shared with the vector variants' tail handling.

namespace egosim::kernels::detail {

std::size_t intersect_count_scalar(const std::uint32_t* a, std::size_t na,
                                   const std::uint32_t* b, std::size_t nb);
void jaccard_scalar(const double* cn, const double* di, const double* dj,
                    double* out, std::size_t n);
void salton_scalar(const double* cn, const double* di, const double* dj,
                   double* out, std::size_t n);
void hpi_scalar(const double* cn, const double* di, const double* dj,
                double* out, std::size_t n);
void hdi_scalar(const double* cn, const double* di, const double* dj,
                double* out, std::size_t n);
void rss_scalar(const double* w, const double* si, const double* sj,
                double* out, std::size_t n);
void ego_scalar(const double* co, const double* deg_lo, const double* deg_hi,
                double node_count, double* out, std::size_t n);
double sum_scalar(const double* x, std::size_t n);
double dot_scalar(const double* x, const double* y, std::size_t n);

}  // namespace egosim::kernels::detail
