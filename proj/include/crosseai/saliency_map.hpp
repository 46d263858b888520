#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "crosseai/errors.hpp"

namespace crosseai {

struct Dims {
    int width = 0;
    int height = 0;

    friend bool operator==(const Dims&, const Dims&) = default;
};

/// Row-major 2-D grid with at least one cell. Storage is contiguous so
/// kernels can walk it as a flat span.
template <typename T>
class Grid {
public:
    using value_type = T;

    Grid(int width, int height, T fill = T{}) : Grid(Dims{width, height}, fill) {}

    explicit Grid(Dims dims, T fill = T{}) : dims_(checked(dims)), cells_(area(dims_), fill) {}

    Grid(int width, int height, std::vector<T> cells) : dims_(checked({width, height})), cells_(std::move(cells)) {
        if (cells_.size() != area(dims_)) {
            throw DimensionMismatch("grid payload has " + std::to_string(cells_.size()) + " cells, expected " +
                                    std::to_string(area(dims_)));
        }
    }

    int width() const noexcept { return dims_.width; }
    int height() const noexcept { return dims_.height; }
    Dims dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return cells_.size(); }

    T& at(int x, int y) { return cells_[index(x, y)]; }
    const T& at(int x, int y) const { return cells_[index(x, y)]; }

    std::span<T> row(int y) { return {cells_.data() + static_cast<std::size_t>(y) * dims_.width, static_cast<std::size_t>(dims_.width)}; }
    std::span<const T> row(int y) const {
        return {cells_.data() + static_cast<std::size_t>(y) * dims_.width, static_cast<std::size_t>(dims_.width)};
    }

    std::span<T> values() noexcept { return cells_; }
    std::span<const T> values() const noexcept { return cells_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    static Dims checked(Dims d) {
        if (d.width < 1 || d.height < 1) {
            throw ParameterError("grid dimensions must be positive, got " + std::to_string(d.width) + "x" +
                                 std::to_string(d.height));
        }
        return d;
    }
    static std::size_t area(Dims d) { return static_cast<std::size_t>(d.width) * static_cast<std::size_t>(d.height); }
    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * dims_.width + x; }

    Dims dims_;
    std::vector<T> cells_;
};

// Heatmap, gradient map and fused map all share this representation.
using SaliencyMap = Grid<double>;
// Cells are 0 or 1.
using BinaryMask = Grid<std::uint8_t>;

struct FusionParams {
    double t = 0.30;               // heatmap weight in the fused map
    double threshold_frac = 0.35;  // mask cutoff as a fraction of the fused maximum
    int top_k = 5;                 // candidate rectangles to extract
    bool expand = true;

    // Throws ParameterError when a field is out of range.
    void validate() const;
};

}  // namespace crosseai
