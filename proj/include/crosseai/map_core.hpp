#pragma once

#include "crosseai/kernels.hpp"
#include "crosseai/saliency_map.hpp"

namespace crosseai {

/// Min-max normalizes intensities to [0, 255]. A constant map carries no
/// contrast and scales to all zeros.
SaliencyMap scale_to_255(const SaliencyMap& map, const kernels::KernelTable& k = kernels::active());

/// Weighted fusion t*heat + (1-t)*grad of two maps already scaled to
/// [0, 255]. Each output pixel stays between its two inputs.
///
/// Throws DimensionMismatch if the maps differ in size and ParameterError
/// if t is outside [0, 1].
SaliencyMap fuse(const SaliencyMap& heat, const SaliencyMap& grad, double t,
                 const kernels::KernelTable& k = kernels::active());

/// Bit is set where intensity strictly exceeds threshold_frac * max(map).
BinaryMask threshold_mask(const SaliencyMap& map, double threshold_frac,
                          const kernels::KernelTable& k = kernels::active());

// Zeroes intensities wherever the mask bit is 0.
SaliencyMap apply_mask(const SaliencyMap& map, const BinaryMask& mask,
                       const kernels::KernelTable& k = kernels::active());

}  // namespace crosseai
