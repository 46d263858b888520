#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "crosseai/eval.hpp"
#include "crosseai/model_math.hpp"

namespace crosseai::io {

// One row of the per-image failure report written by batch runs.
struct FailureRecord {
    std::string image_id;
    std::string label;
    std::string reason;

    friend bool operator==(const FailureRecord&, const FailureRecord&) = default;
};

/// Annotation CSV, header columns in any order:
///   image_id,label,x,y,w,h,img_w,img_h
/// x, y, w, h may be fractional; the box becomes
/// [floor(x), ceil(x + w)) x [floor(y), ceil(y + h)).
/// Throws FormatError with file and line on bad rows.
std::vector<GroundTruthRecord> read_annotations(const std::filesystem::path& path);
void write_annotations(const std::filesystem::path& path, std::span<const GroundTruthRecord> records);

// Prediction CSV: image_id,label,x1,y1,x2,y2,map_w,map_h
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path);
std::string format_predictions(std::span<const PredictionRecord> records);
void write_predictions(const std::filesystem::path& path, std::span<const PredictionRecord> records);

std::string format_failures(std::span<const FailureRecord> records);
void write_failures(const std::filesystem::path& path, std::span<const FailureRecord> records);

// Patient metadata CSV: image_id,patient_id,labels with labels separated by '|'.
std::vector<MetadataRecord> read_metadata(const std::filesystem::path& path);

// Splits one CSV line; handles double-quoted fields.
std::vector<std::string> split_csv_line(const std::string& line);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace crosseai::io
