#include "kernels_internal.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace crosseai::kernels {
namespace {

constexpr KernelTable kScalar{
    Isa::scalar,        "scalar",         scalar::min_max, scalar::scale,         scalar::fuse,
    scalar::threshold,  scalar::apply_mask, scalar::sum,   scalar::update_heights,
};

#if defined(CROSSEAI_HAVE_AVX2)
constexpr KernelTable kAvx2{
    Isa::avx2,        "avx2",           avx2::min_max, avx2::scale,         avx2::fuse,
    avx2::threshold,  avx2::apply_mask, avx2::sum,     avx2::update_heights,
};

bool cpu_has_avx2() noexcept {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
}
#endif

const KernelTable* detect() noexcept {
    const KernelTable* best = &kScalar;
    if (const KernelTable* v = avx2_table()) best = v;
    if (const char* env = std::getenv("CROSSEAI_SIMD")) {
        if (auto isa = parse_isa(env)) {
            if (const KernelTable* forced = table_for(*isa)) best = forced;
        }
    }
    return best;
}

std::atomic<const KernelTable*>& slot() noexcept {
    static std::atomic<const KernelTable*> current{detect()};
    return current;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(CROSSEAI_HAVE_AVX2)
    static const bool supported = cpu_has_avx2();
    return supported ? &kAvx2 : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable* table_for(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar:
            return &kScalar;
        case Isa::avx2:
            return avx2_table();
    }
    return nullptr;
}

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

bool set_active(Isa isa) noexcept {
    const KernelTable* t = table_for(isa);
    if (t == nullptr) return false;
    slot().store(t, std::memory_order_release);
    return true;
}

std::optional<Isa> parse_isa(std::string_view name) noexcept {
    if (name == "scalar") return Isa::scalar;
    if (name == "avx2") return Isa::avx2;
    if (name == "auto") {
        return avx2_table() != nullptr ? Isa::avx2 : Isa::scalar;
    }
    return std::nullopt;
}

}  // namespace crosseai::kernels
