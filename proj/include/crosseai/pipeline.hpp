#pragma once

// Batch orchestration behind the command-line tool.
//
// Input layout for heatmaps and gradient maps:
//   <dir>/<label>/<image_id>.npy   (or .pgm)
// The image id is the file name without the map extension, so
// "Mass/00013118_008.png.npy" is image "00013118_008.png", label "Mass".

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crosseai/boxgen.hpp"
#include "crosseai/eval.hpp"
#include "crosseai/io/records.hpp"

namespace crosseai::pipeline {

namespace fs = std::filesystem;

struct RunConfig {
    FusionParams fusion;
    fs::path heat_dir;
    fs::path grad_dir;
    std::optional<fs::path> annotations;
    fs::path out_dir = "out";
    std::vector<double> thresholds = default_iou_thresholds();
    int workers = 1;
    bool overlays = false;

    void validate() const;
};

// A heatmap/gradient-map pair found on disk. A missing side has an empty path.
struct MapJob {
    std::string image_id;
    std::string label;
    fs::path heat;
    fs::path grad;
};

// Sorted by (image_id, label).
std::vector<MapJob> discover_jobs(const fs::path& heat_dir, const fs::path& grad_dir);

struct LoadedPair {
    std::string image_id;
    std::string label;
    std::optional<SaliencyMap> heat;
    std::optional<SaliencyMap> grad;
    std::string error;  // set when the pair cannot be used
};

std::vector<LoadedPair> load_pairs(std::span<const MapJob> jobs, int workers);

struct OverlayOptions {
    fs::path dir;
    std::span<const GroundTruthRecord> truth;
};

struct BoxgenRun {
    std::vector<PredictionRecord> predictions;  // sorted by (image_id, label)
    std::vector<io::FailureRecord> failures;    // sorted by (image_id, label)
    std::vector<std::string> warnings;
};

/// Runs box generation over loaded pairs on `workers` threads. Output is
/// independent of the worker count. Overlays are written when requested.
BoxgenRun generate_all(std::span<const LoadedPair> pairs, const FusionParams& params, int workers,
                       const std::optional<OverlayOptions>& overlays = std::nullopt);

/// boxgen subcommand: discovers and loads maps, generates boxes, writes
/// predictions.csv and failures.csv (and overlays/ when enabled) into out_dir.
BoxgenRun cmd_boxgen(const RunConfig& config);

struct EvalRun {
    EvalTable table;
    std::vector<std::string> warnings;
};

/// eval subcommand. Labels come from the annotation file (sorted).
/// Predictions with labels absent from the annotations are excluded with a
/// warning. When out_csv is set the CSV rendering is written there.
EvalRun cmd_eval(const fs::path& predictions, const fs::path& annotations, std::span<const double> thresholds,
                 const std::optional<fs::path>& out_csv = std::nullopt);

EvalRun evaluate(std::span<const PredictionRecord> predictions, std::span<const GroundTruthRecord> truth,
                 std::span<const double> thresholds);

struct SweepRow {
    double t = 0.0;
    double threshold_frac = 0.0;
    double mean_accuracy = 0.0;        // mean over thresholds of the per-threshold label mean
    double mean_iou = 0.0;             // over ground-truth records, 0 where undetected
    std::vector<double> per_threshold;  // label mean at each threshold
};

struct SweepRun {
    std::vector<double> thresholds;
    std::vector<SweepRow> rows;  // t-major, in the order given
    std::size_t best = 0;        // highest mean_accuracy, then mean_iou, then first in order
    std::vector<std::string> warnings;
};

/// sweep subcommand: evaluates every (t, threshold_frac) pair against the
/// annotations and writes sweep.csv into out_dir. Throws ParameterError on
/// an empty grid.
SweepRun cmd_sweep(const RunConfig& config, std::span<const double> t_values, std::span<const double> frac_values);

std::string format_sweep_csv(const SweepRun& run);

// Synthetic heatmap/gradient pair with a known lesion box and an off-class
// edge the generated box must avoid.
struct DemoFixture {
    std::string image_id;
    std::string label;
    SaliencyMap heat;
    SaliencyMap grad;
    BoundingBox lesion;
    int edge_column;
};

DemoFixture make_demo_fixture();

struct DemoResult {
    BoundingBox truth;
    std::optional<BoundingBox> generated;
    double iou = 0.0;
    bool edge_excluded = false;
    bool passed = false;
    EvalTable table;
};

inline constexpr double kDemoMinIou = 0.5;

/// demo subcommand: writes the fixture under out_dir/demo, runs boxgen and
/// eval through the files, and checks IoU >= kDemoMinIou with the edge
/// column excluded. Throws IoError if out_dir cannot be written.
DemoResult cmd_demo(const fs::path& out_dir, const FusionParams& params = {});

// Calls fn(i) for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace crosseai::pipeline
