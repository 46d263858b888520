#pragma once

#include <filesystem>

#include "crosseai/saliency_map.hpp"

namespace crosseai::io {

// Accepted on load:
//   NPY  version 1.0, C order, exactly 2 dims, dtype '<f4' or '|u1'
//   PGM  binary P5 with maxval 255
// Violations raise FormatError naming the problem.
enum class MapFormat { npy, pgm };

SaliencyMap load_map(const std::filesystem::path& path);

// Format from the extension: ".pgm" writes P5 (rounded, clamped to
// [0, 255]); anything else writes float32 NPY.
void save_map(const SaliencyMap& map, const std::filesystem::path& path);

SaliencyMap load_npy(const std::filesystem::path& path);
void save_npy(const SaliencyMap& map, const std::filesystem::path& path);
SaliencyMap load_pgm(const std::filesystem::path& path);
void save_pgm(const SaliencyMap& map, const std::filesystem::path& path);

bool is_map_file(const std::filesystem::path& path);

}  // namespace crosseai::io
