// Compiled with -mavx2 (and without -mfma); only reached after a CPUID check.
#include "kernels_internal.hpp"

#include <immintrin.h>

#include <cstring>

namespace crosseai::kernels::avx2 {

void min_max(const double* x, std::size_t n, double* lo, double* hi) {
    std::size_t i = 0;
    double mn;
    double mx;
    if (n >= 4) {
        __m256d vlo = _mm256_loadu_pd(x);
        __m256d vhi = vlo;
        for (i = 4; i + 4 <= n; i += 4) {
            const __m256d v = _mm256_loadu_pd(x + i);
            vlo = _mm256_min_pd(v, vlo);
            vhi = _mm256_max_pd(v, vhi);
        }
        double lane_lo[4];
        double lane_hi[4];
        _mm256_storeu_pd(lane_lo, vlo);
        _mm256_storeu_pd(lane_hi, vhi);
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
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vrange = _mm256_set1_pd(range);
    const __m256d v255 = _mm256_set1_pd(255.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_sub_pd(_mm256_loadu_pd(x + i), vlo);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_div_pd(v, vrange), v255));
    }
    for (; i < n; ++i) out[i] = (x[i] - lo) / range * 255.0;
}

void fuse(const double* h, const double* g, double* out, std::size_t n, double t) {
    const double w = 1.0 - t;
    const __m256d vt = _mm256_set1_pd(t);
    const __m256d vw = _mm256_set1_pd(w);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vh = _mm256_loadu_pd(h + i);
        const __m256d vg = _mm256_loadu_pd(g + i);
        const __m256d v = _mm256_add_pd(_mm256_mul_pd(vt, vh), _mm256_mul_pd(vw, vg));
        const __m256d a = _mm256_min_pd(vh, vg);
        const __m256d b = _mm256_max_pd(vh, vg);
        _mm256_storeu_pd(out + i, _mm256_min_pd(_mm256_max_pd(v, a), b));
    }
    for (; i < n; ++i) {
        const double v = t * h[i] + w * g[i];
        out[i] = lane_min(lane_max(v, lane_min(h[i], g[i])), lane_max(h[i], g[i]));
    }
}

void threshold(const double* x, std::uint8_t* out, std::size_t n, double cutoff) {
    const __m256d vc = _mm256_set1_pd(cutoff);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const int bits = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_loadu_pd(x + i), vc, _CMP_GT_OQ));
        out[i] = bits & 1;
        out[i + 1] = (bits >> 1) & 1;
        out[i + 2] = (bits >> 2) & 1;
        out[i + 3] = (bits >> 3) & 1;
    }
    for (; i < n; ++i) out[i] = x[i] > cutoff ? 1 : 0;
}

void apply_mask(const double* x, const std::uint8_t* mask, double* out, std::size_t n) {
    const __m256i zero = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        std::int32_t packed;
        std::memcpy(&packed, mask + i, sizeof packed);
        const __m256i wide = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(packed));
        const __m256i off = _mm256_cmpeq_epi64(wide, zero);
        const __m256d v = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(out + i, _mm256_andnot_pd(_mm256_castsi256_pd(off), v));
    }
    for (; i < n; ++i) out[i] = mask[i] ? x[i] : 0.0;
}

double sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    double lane[4];
    _mm256_storeu_pd(lane, acc);
    double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
    for (; i < n; ++i) s += x[i];
    return s;
}

void update_heights(const std::uint8_t* bits, std::int32_t* heights, std::size_t n) {
    const __m256i zero = _mm256_setzero_si256();
    const __m256i one = _mm256_set1_epi32(1);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256i b = _mm256_cvtepu8_epi32(_mm_loadl_epi64(reinterpret_cast<const __m128i*>(bits + i)));
        const __m256i off = _mm256_cmpeq_epi32(b, zero);
        auto* dst = reinterpret_cast<__m256i*>(heights + i);
        const __m256i next = _mm256_add_epi32(_mm256_loadu_si256(dst), one);
        _mm256_storeu_si256(dst, _mm256_andnot_si256(off, next));
    }
    for (; i < n; ++i) heights[i] = bits[i] ? heights[i] + 1 : 0;
}

}  // namespace crosseai::kernels::avx2
