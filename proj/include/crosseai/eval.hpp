#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crosseai/bounding_box.hpp"

namespace crosseai {

struct GroundTruthRecord {
    std::string image_id;
    std::string label;
    BoundingBox box;  // original image resolution
    Dims image_dims;

    friend bool operator==(const GroundTruthRecord&, const GroundTruthRecord&) = default;
};

struct PredictionRecord {
    std::string image_id;
    std::string label;
    BoundingBox box;
    Dims map_dims;  // resolution the box was generated at

    friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

/// Detection accuracy per (IoU threshold, label), plus the unweighted mean
/// over labels. A cell is empty when the label has no ground truth.
struct EvalTable {
    std::vector<double> thresholds;
    std::vector<std::string> labels;
    std::vector<std::vector<std::optional<double>>> accuracy;  // [threshold][label]
    std::vector<std::optional<double>> mean;                   // [threshold]
    std::vector<std::size_t> support;                          // ground-truth count per label

    std::optional<double> cell(std::size_t threshold, std::size_t label) const { return accuracy[threshold][label]; }
};

// Default T(IoU) rows: 0.1, 0.2, ..., 0.7.
std::vector<double> default_iou_thresholds();

// Throws ParameterError unless non-empty, strictly increasing and inside (0, 1).
void validate_thresholds(std::span<const double> thresholds);

/// Intersection over union with half-open pixel areas; 0 for disjoint boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

/// Maps a box between resolutions. Left/top edges round down, right/bottom
/// edges round up, so the result is never empty and always covers the
/// exact image of the input.
BoundingBox scale_box(const BoundingBox& box, Dims from, Dims to);

/// IoU of each ground-truth record with its prediction (after rescaling to
/// the ground-truth resolution), in ground-truth order; 0 where no
/// prediction exists.
///
/// Throws ParameterError on duplicate (image_id, label) keys on either side.
std::vector<double> match_ious(std::span<const PredictionRecord> preds, std::span<const GroundTruthRecord> truth);

/// accuracy = #(ground truth with IoU >= T) / #(ground truth of that label).
/// Ground truth whose label is not in `labels` is ignored.
EvalTable accuracy_table(std::span<const PredictionRecord> preds, std::span<const GroundTruthRecord> truth,
                         std::span<const double> thresholds, std::span<const std::string> labels);

// Aligned text with one block per threshold, two decimals, "n/a" for empty cells.
std::string format_table_text(const EvalTable& table);

// Columns: iou_threshold,label,accuracy,support
std::string format_table_csv(const EvalTable& table);

}  // namespace crosseai
