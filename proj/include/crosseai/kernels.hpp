#pragma once

// Data-parallel inner loops used by the map and box stages.
//
// Every kernel has a scalar reference and, on x86-64, an AVX2 variant. The
// variants are bit-identical: no fused multiply-add, and the reduction in
// `sum` accumulates in four fixed lanes combined as (l0 + l1) + (l2 + l3) in
// both implementations. The active table is picked once at first use from
// CPUID, and can be overridden with CROSSEAI_SIMD=scalar|avx2|auto.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace crosseai::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;
    const char* name;

    // Writes min and max of x[0..n). n >= 1.
    void (*min_max)(const double* x, std::size_t n, double* lo, double* hi);
    // out[i] = (x[i] - lo) / range * 255
    void (*scale)(const double* x, double* out, std::size_t n, double lo, double range);
    // out[i] = t*h[i] + (1-t)*g[i], clamped into [min(h,g), max(h,g)]
    void (*fuse)(const double* h, const double* g, double* out, std::size_t n, double t);
    // out[i] = x[i] > cutoff
    void (*threshold)(const double* x, std::uint8_t* out, std::size_t n, double cutoff);
    // out[i] = mask[i] ? x[i] : 0
    void (*apply_mask)(const double* x, const std::uint8_t* mask, double* out, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    // Histogram step of the maximal-rectangle search:
    // heights[i] = bits[i] ? heights[i] + 1 : 0
    void (*update_heights)(const std::uint8_t* bits, std::int32_t* heights, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_table() noexcept;

const KernelTable* table_for(Isa isa) noexcept;

// Best table supported by this CPU, honoring CROSSEAI_SIMD.
const KernelTable& active() noexcept;

// Forces the table returned by active(). Returns false if unsupported here.
bool set_active(Isa isa) noexcept;

std::optional<Isa> parse_isa(std::string_view name) noexcept;

}  // namespace crosseai::kernels
