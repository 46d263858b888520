#include "kernels_internal.hpp"

namespace crosseai::kernels::scalar {

void min_max(const double* x, std::size_t n, double* lo, double* hi) {
    std::size_t i = 0;
    double mn;
    double mx;
    if (n >= 4) {
        // Same lane layout and operand order as the vector kernel so that
        // signed zeros resolve identically.
        double lane_lo[4] = {x[0], x[1], x[2], x[3]};
        double lane_hi[4] = {x[0], x[1], x[2], x[3]};
        for (i = 4; i + 4 <= n; i += 4) {
            for (int l = 0; l < 4; ++l) {
                lane_lo[l] = lane_min(x[i + l], lane_lo[l]);
                lane_hi[l] = lane_max(x[i + l], lane_hi[l]);
            }
        }
        mn = combine_min(lane_lo);
        mx = combine_max(lane_hi);
    } else {
        mn = mx = x[0];
        i = 1;
    }
    for (; i < n; ++i) {
        mn = lane_min(x[i], mn);
        mx = lane_max(x[i], mx);
    }
    *lo = mn;
    *hi = mx;
}

void scale(const double* x, double* out, std::size_t n, double lo, double range) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] - lo) / range * 255.0;
}

void fuse(const double* h, const double* g, double* out, std::size_t n, double t) {
    const double w = 1.0 - t;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = t * h[i] + w * g[i];
        const double a = lane_min(h[i], g[i]);
        const double b = lane_max(h[i], g[i]);
        out[i] = lane_min(lane_max(v, a), b);
    }
}

void threshold(const double* x, std::uint8_t* out, std::size_t n, double cutoff) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] > cutoff ? 1 : 0;
}

void apply_mask(const double* x, const std::uint8_t* mask, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = mask[i] ? x[i] : 0.0;
}

double sum(const double* x, std::size_t n) {
    double lane[4] = {0.0, 0.0, 0.0, 0.0};
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        lane[0] += x[i];
        lane[1] += x[i + 1];
        lane[2] += x[i + 2];
        lane[3] += x[i + 3];
    }
    double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
    for (; i < n; ++i) s += x[i];
    return s;
}

void update_heights(const std::uint8_t* bits, std::int32_t* heights, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) heights[i] = bits[i] ? heights[i] + 1 : 0;
}

}  // namespace crosseai::kernels::scalar
