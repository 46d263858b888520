#pragma once

#include <span>
#include <vector>

#include "crosseai/bounding_box.hpp"
#include "crosseai/kernels.hpp"
#include "crosseai/saliency_map.hpp"

namespace crosseai {

/// Greedy candidate extraction: take the largest all-ones rectangle, clear it
/// in a working copy of the mask, repeat up to top_k times or until the mask
/// is empty. Candidates are pairwise disjoint.
///
/// Equal-area rectangles are ordered by smaller y1, then smaller x1, then
/// larger width. An all-zero mask yields an empty list.
std::vector<BoundingBox> max_rectangles(const BinaryMask& mask, int top_k,
                                        const kernels::KernelTable& k = kernels::active());

struct Expansion {
    BoundingBox box;
    int steps = 0;  // growth steps applied
};

/// Grows the box one pixel per side (clipped at the border) while the newly
/// added ring has at least as many 1-bits as 0-bits. A ring without any
/// 1-bits stops growth. The failing step is not applied.
Expansion expand_box_traced(const BoundingBox& box, const BinaryMask& mask);

inline BoundingBox expand_box(const BoundingBox& box, const BinaryMask& mask) {
    return expand_box_traced(box, mask).box;
}

/// Candidate with the highest mean intensity over its pixels in the masked
/// map. Ties go to the larger area, then the smaller (y1, x1).
///
/// Throws NoLocalizableRegion when candidates is empty.
BoundingBox select_box(std::span<const BoundingBox> candidates, const SaliencyMap& masked_map,
                       const kernels::KernelTable& k = kernels::active());

// Mean of the map over the box's pixels.
double mean_intensity(const SaliencyMap& map, const BoundingBox& box,
                      const kernels::KernelTable& k = kernels::active());

// Every intermediate of one box generation run.
struct BoxgenTrace {
    SaliencyMap heat_scaled;
    SaliencyMap grad_scaled;
    SaliencyMap fused;
    BinaryMask mask;
    SaliencyMap masked;
    std::vector<BoundingBox> candidates;
    std::vector<BoundingBox> expanded;
    BoundingBox box;
};

/// Full box generation from a raw heatmap and gradient map:
/// scale both, fuse, threshold, mask, extract candidates, optionally expand,
/// select.
///
/// Throws DimensionMismatch, ParameterError for bad params, and
/// NoLocalizableRegion when the mask is empty.
BoxgenTrace trace_bbox(const SaliencyMap& heat, const SaliencyMap& grad, const FusionParams& params,
                       const kernels::KernelTable& k = kernels::active());

inline BoundingBox generate_bbox(const SaliencyMap& heat, const SaliencyMap& grad, const FusionParams& params,
                                 const kernels::KernelTable& k = kernels::active()) {
    return trace_bbox(heat, grad, params, k).box;
}

}  // namespace crosseai
