#include "crosseai/map_core.hpp"

#include <string>

namespace crosseai {
namespace {

void require_same_dims(Dims a, Dims b, const char* what) {
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": " + std::to_string(a.width) + "x" + std::to_string(a.height) +
                                " vs " + std::to_string(b.width) + "x" + std::to_string(b.height));
    }
}

void require_unit_interval(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ParameterError(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
    }
}

}  // namespace

void FusionParams::validate() const {
    require_unit_interval(t, "t");
    require_unit_interval(threshold_frac, "threshold_frac");
    if (top_k < 1) throw ParameterError("top_k must be at least 1, got " + std::to_string(top_k));
}

SaliencyMap scale_to_255(const SaliencyMap& map, const kernels::KernelTable& k) {
    const auto in = map.values();
    double lo = 0.0;
    double hi = 0.0;
    k.min_max(in.data(), in.size(), &lo, &hi);

    SaliencyMap out(map.dims(), 0.0);
    if (hi > lo) {
        k.scale(in.data(), out.values().data(), in.size(), lo, hi - lo);
    }
    return out;
}

SaliencyMap fuse(const SaliencyMap& heat, const SaliencyMap& grad, double t, const kernels::KernelTable& k) {
    require_same_dims(heat.dims(), grad.dims(), "fuse: heatmap and gradient map differ in size");
    require_unit_interval(t, "t");
    SaliencyMap out(heat.dims());
    k.fuse(heat.values().data(), grad.values().data(), out.values().data(), out.size(), t);
    return out;
}

BinaryMask threshold_mask(const SaliencyMap& map, double threshold_frac, const kernels::KernelTable& k) {
    require_unit_interval(threshold_frac, "threshold_frac");
    const auto in = map.values();
    double lo = 0.0;
    double hi = 0.0;
    k.min_max(in.data(), in.size(), &lo, &hi);

    BinaryMask mask(map.dims());
    k.threshold(in.data(), mask.values().data(), in.size(), threshold_frac * hi);
    return mask;
}

SaliencyMap apply_mask(const SaliencyMap& map, const BinaryMask& mask, const kernels::KernelTable& k) {
    require_same_dims(map.dims(), mask.dims(), "apply_mask: map and mask differ in size");
    SaliencyMap out(map.dims());
    k.apply_mask(map.values().data(), mask.values().data(), out.values().data(), out.size());
    return out;
}

}  // namespace crosseai
