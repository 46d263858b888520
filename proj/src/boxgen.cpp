#include "crosseai/boxgen.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>

#include "crosseai/map_core.hpp"

namespace crosseai {
namespace {

// Strict weak "better candidate" order for the rectangle search.
bool better_rectangle(const BoundingBox& a, const BoundingBox& b) {
    return std::make_tuple(-a.area(), a.y1, a.x1, -a.width()) < std::make_tuple(-b.area(), b.y1, b.x1, -b.width());
}

// Largest all-ones rectangle via per-row histograms and a monotone stack.
// Every rectangle that cannot be extended sideways or upward is visited at
// its bottom row, so all maximum-area rectangles compete in the tie-break.
std::optional<BoundingBox> largest_rectangle(const BinaryMask& mask, const kernels::KernelTable& k) {
    const int w = mask.width();
    std::vector<std::int32_t> heights(static_cast<std::size_t>(w), 0);
    std::vector<int> stack;
    stack.reserve(static_cast<std::size_t>(w));
    std::optional<BoundingBox> best;

    for (int y = 0; y < mask.height(); ++y) {
        k.update_heights(mask.row(y).data(), heights.data(), heights.size());
        stack.clear();
        for (int i = 0; i <= w; ++i) {
            const std::int32_t cur = i < w ? heights[static_cast<std::size_t>(i)] : 0;
            while (!stack.empty() && heights[static_cast<std::size_t>(stack.back())] >= cur) {
                const std::int32_t h = heights[static_cast<std::size_t>(stack.back())];
                stack.pop_back();
                if (h == 0) continue;
                const int left = stack.empty() ? 0 : stack.back() + 1;
                const BoundingBox r{left, y + 1 - h, i, y + 1};
                if (!best || better_rectangle(r, *best)) best = r;
            }
            stack.push_back(i);
        }
    }
    return best;
}

// Summed-area table over mask bits.
class OnesCounter {
public:
    explicit OnesCounter(const BinaryMask& mask)
        : stride_(static_cast<std::size_t>(mask.width()) + 1),
          table_(stride_ * (static_cast<std::size_t>(mask.height()) + 1), 0) {
        for (int y = 0; y < mask.height(); ++y) {
            long long run = 0;
            const auto row = mask.row(y);
            for (int x = 0; x < mask.width(); ++x) {
                run += row[static_cast<std::size_t>(x)] ? 1 : 0;
                at(x + 1, y + 1) = at(x + 1, y) + run;
            }
        }
    }

    long long count(const BoundingBox& b) const { return at(b.x2, b.y2) - at(b.x1, b.y2) - at(b.x2, b.y1) + at(b.x1, b.y1); }

private:
    long long& at(int x, int y) { return table_[static_cast<std::size_t>(y) * stride_ + static_cast<std::size_t>(x)]; }
    long long at(int x, int y) const { return table_[static_cast<std::size_t>(y) * stride_ + static_cast<std::size_t>(x)]; }

    std::size_t stride_;
    std::vector<long long> table_;
};

Expansion expand_with(const BoundingBox& box, const OnesCounter& ones, Dims dims) {
    Expansion e{box, 0};
    for (;;) {
        const BoundingBox& b = e.box;
        const BoundingBox grown{std::max(0, b.x1 - 1), std::max(0, b.y1 - 1), std::min(dims.width, b.x2 + 1),
                                std::min(dims.height, b.y2 + 1)};
        if (grown == b) break;  // already spans the image

        const long long ring_ones = ones.count(grown) - ones.count(b);
        const long long ring_zeros = (grown.area() - b.area()) - ring_ones;
        if (ring_ones == 0 || ring_zeros > ring_ones) break;

        e.box = grown;
        ++e.steps;
    }
    return e;
}

void require_inside(const BoundingBox& box, Dims dims, const char* what) {
    if (!box.valid_within(dims)) {
        throw ParameterError(std::string(what) + ": box outside " + std::to_string(dims.width) + "x" +
                             std::to_string(dims.height) + " image");
    }
}

}  // namespace

std::vector<BoundingBox> max_rectangles(const BinaryMask& mask, int top_k, const kernels::KernelTable& k) {
    if (top_k < 1) throw ParameterError("top_k must be at least 1, got " + std::to_string(top_k));

    BinaryMask work = mask;
    std::vector<BoundingBox> out;
    while (static_cast<int>(out.size()) < top_k) {
        const auto rect = largest_rectangle(work, k);
        if (!rect) break;
        out.push_back(*rect);
        for (int y = rect->y1; y < rect->y2; ++y) {
            auto row = work.row(y);
            std::fill(row.begin() + rect->x1, row.begin() + rect->x2, std::uint8_t{0});
        }
    }
    return out;
}

Expansion expand_box_traced(const BoundingBox& box, const BinaryMask& mask) {
    require_inside(box, mask.dims(), "expand_box");
    return expand_with(box, OnesCounter(mask), mask.dims());
}

double mean_intensity(const SaliencyMap& map, const BoundingBox& box, const kernels::KernelTable& k) {
    require_inside(box, map.dims(), "mean_intensity");
    double total = 0.0;
    for (int y = box.y1; y < box.y2; ++y) {
        total += k.sum(map.row(y).data() + box.x1, static_cast<std::size_t>(box.width()));
    }
    return total / static_cast<double>(box.area());
}

BoundingBox select_box(std::span<const BoundingBox> candidates, const SaliencyMap& masked_map,
                       const kernels::KernelTable& k) {
    if (candidates.empty()) throw NoLocalizableRegion();

    const BoundingBox* best = nullptr;
    double best_mean = 0.0;
    for (const BoundingBox& c : candidates) {
        const double m = mean_intensity(masked_map, c, k);
        bool take = best == nullptr || m > best_mean;
        if (!take && m == best_mean) {
            take = c.area() > best->area() ||
                   (c.area() == best->area() && std::tie(c.y1, c.x1) < std::tie(best->y1, best->x1));
        }
        if (take) {
            best = &c;
            best_mean = m;
        }
    }
    return *best;
}

BoxgenTrace trace_bbox(const SaliencyMap& heat, const SaliencyMap& grad, const FusionParams& params,
                       const kernels::KernelTable& k) {
    params.validate();
    if (heat.dims() != grad.dims()) {
        throw DimensionMismatch("dimension mismatch: heatmap " + std::to_string(heat.width()) + "x" + std::to_string(heat.height()) +
                                " vs gradient map " + std::to_string(grad.width()) + "x" +
                                std::to_string(grad.height()));
    }

    SaliencyMap heat_scaled = scale_to_255(heat, k);
    SaliencyMap grad_scaled = scale_to_255(grad, k);
    SaliencyMap fused = crosseai::fuse(heat_scaled, grad_scaled, params.t, k);
    BinaryMask mask = threshold_mask(fused, params.threshold_frac, k);
    SaliencyMap masked = apply_mask(fused, mask, k);

    std::vector<BoundingBox> candidates = max_rectangles(mask, params.top_k, k);
    if (candidates.empty()) throw NoLocalizableRegion();

    std::vector<BoundingBox> expanded = candidates;
    if (params.expand) {
        const OnesCounter ones(mask);
        for (BoundingBox& b : expanded) b = expand_with(b, ones, mask.dims()).box;
    }
    const BoundingBox box = select_box(expanded, masked, k);

    return BoxgenTrace{std::move(heat_scaled), std::move(grad_scaled), std::move(fused), std::move(mask),
                       std::move(masked),      std::move(candidates),  std::move(expanded), box};
}

}  // namespace crosseai
