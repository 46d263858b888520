#pragma once

#include <cstddef>
#include <cstdint>

#include "crosseai/kernels.hpp"

namespace crosseai::kernels {

// Scalar mirrors of _mm256_min_pd(a, b) / _mm256_max_pd(a, b): the second
// operand wins on equality and on NaN.
inline double lane_min(double a, double b) { return a < b ? a : b; }
inline double lane_max(double a, double b) { return a > b ? a : b; }

inline double combine_min(const double (&l)[4]) { return lane_min(lane_min(l[0], l[1]), lane_min(l[2], l[3])); }
inline double combine_max(const double (&l)[4]) { return lane_max(lane_max(l[0], l[1]), lane_max(l[2], l[3])); }

namespace scalar {
void min_max(const double* x, std::size_t n, double* lo, double* hi);
void scale(const double* x, double* out, std::size_t n, double lo, double range);
void fuse(const double* h, const double* g, double* out, std::size_t n, double t);
void threshold(const double* x, std::uint8_t* out, std::size_t n, double cutoff);
void apply_mask(const double* x, const std::uint8_t* mask, double* out, std::size_t n);
double sum(const double* x, std::size_t n);
void update_heights(const std::uint8_t* bits, std::int32_t* heights, std::size_t n);
}  // namespace scalar

#if defined(CROSSEAI_HAVE_AVX2)
namespace avx2 {
void min_max(const double* x, std::size_t n, double* lo, double* hi);
void scale(const double* x, double* out, std::size_t n, double lo, double range);
void fuse(const double* h, const double* g, double* out, std::size_t n, double t);
void threshold(const double* x, std::uint8_t* out, std::size_t n, double cutoff);
void apply_mask(const double* x, const std::uint8_t* mask, double* out, std::size_t n);
double sum(const double* x, std::size_t n);
void update_heights(const std::uint8_t* bits, std::int32_t* heights, std::size_t n);
}  // namespace avx2
#endif

}  // namespace crosseai::kernels
