#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "crosseai/bounding_box.hpp"
#include "crosseai/saliency_map.hpp"

namespace crosseai::io {

struct Rgb {
    std::uint8_t r, g, b;
};

inline constexpr Rgb kGeneratedColor{255, 0, 0};    // red
inline constexpr Rgb kGroundTruthColor{255, 255, 0};  // yellow

// 8-bit RGB raster, row-major.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // width * height * 3

    Rgb at(int x, int y) const;
};

/// Grayscale rendering of the map (min-max scaled) with the generated box
/// outlined in red and, when given, the ground-truth box in yellow. Boxes
/// are in map coordinates and drawn `thickness` pixels wide, inward.
RgbImage render_overlay(const SaliencyMap& background, const BoundingBox& generated,
                        const std::optional<BoundingBox>& truth, int thickness = 1);

void write_png(const RgbImage& image, const std::filesystem::path& path);

}  // namespace crosseai::io
