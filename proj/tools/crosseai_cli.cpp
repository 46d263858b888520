// Command-line front end: fuse, boxgen, eval, sweep, demo.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 demo check failed.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "crosseai/boxgen.hpp"
#include "crosseai/errors.hpp"
#include "crosseai/io/map_file.hpp"
#include "crosseai/kernels.hpp"
#include "crosseai/map_core.hpp"
#include "crosseai/pipeline.hpp"

namespace {

using namespace crosseai;
namespace fs = std::filesystem;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDemo = 3;

struct FusionFlags {
    FusionParams params;
    bool no_expand = false;

    void attach(CLI::App* app, bool with_grid_params = true) {
        if (with_grid_params) {
            app->add_option("--t", params.t, "Heatmap weight in the fused map")->capture_default_str();
            app->add_option("--threshold-frac", params.threshold_frac, "Mask cutoff as a fraction of the fused maximum")
                ->capture_default_str();
        }
        app->add_option("--top-k", params.top_k, "Candidate rectangles to extract")->capture_default_str();
        app->add_flag("--no-expand", no_expand, "Disable ring expansion of candidates");
    }

    FusionParams resolve() const {
        FusionParams p = params;
        p.expand = !no_expand;
        return p;
    }
};

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Saliency-fusion bounding box generation and IoU evaluation"};
    app.require_subcommand(1);

    std::string simd = "auto";
    app.add_option("--simd", simd, "Kernel set: auto, scalar or avx2")->capture_default_str();

    // fuse
    auto* fuse_cmd = app.add_subcommand("fuse", "Scale and fuse one heatmap/gradient-map pair");
    fs::path fuse_heat;
    fs::path fuse_grad;
    fs::path fuse_out = "fused.npy";
    std::string fuse_mask_out;
    FusionFlags fuse_flags;
    fuse_cmd->add_option("--heat", fuse_heat, "Heatmap (NPY or PGM)")->required();
    fuse_cmd->add_option("--grad", fuse_grad, "Gradient map (NPY or PGM)")->required();
    fuse_cmd->add_option("--out", fuse_out, "Fused map output (.npy or .pgm)")->capture_default_str();
    fuse_cmd->add_option("--mask-out", fuse_mask_out, "Optional thresholded mask output (0/255 values)");
    fuse_cmd->add_option("--t", fuse_flags.params.t, "Heatmap weight")->capture_default_str();
    fuse_cmd->add_option("--threshold-frac", fuse_flags.params.threshold_frac, "Mask cutoff fraction")
        ->capture_default_str();

    // boxgen
    auto* boxgen_cmd = app.add_subcommand("boxgen", "Generate one box per (image, label) map pair");
    pipeline::RunConfig box_cfg;
    FusionFlags box_flags;
    std::string box_annotations;
    box_flags.attach(boxgen_cmd);
    boxgen_cmd->add_option("--heat-dir", box_cfg.heat_dir, "Heatmaps, laid out as <dir>/<label>/<image_id>.npy")
        ->required();
    boxgen_cmd->add_option("--grad-dir", box_cfg.grad_dir, "Gradient maps, same layout")->required();
    boxgen_cmd->add_option("--annotations", box_annotations, "Ground-truth CSV for overlays");
    boxgen_cmd->add_option("--out", box_cfg.out_dir, "Output directory")->capture_default_str();
    boxgen_cmd->add_option("--workers", box_cfg.workers, "Worker threads")->capture_default_str();
    boxgen_cmd->add_flag("--overlays", box_cfg.overlays, "Write PNG overlays");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Detection accuracy at IoU thresholds");
    fs::path eval_preds;
    fs::path eval_ann;
    std::vector<double> eval_thresholds = default_iou_thresholds();
    std::string eval_out;
    eval_cmd->add_option("--predictions", eval_preds, "Predictions CSV")->required();
    eval_cmd->add_option("--annotations", eval_ann, "Ground-truth CSV")->required();
    eval_cmd->add_option("--thresholds", eval_thresholds, "IoU thresholds, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    eval_cmd->add_option("--out", eval_out, "Directory for eval.csv");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Grid search over t and threshold fraction");
    pipeline::RunConfig sweep_cfg;
    FusionFlags sweep_flags;
    std::string sweep_annotations;
    std::vector<double> t_values{0.30};
    std::vector<double> frac_values{0.35};
    sweep_flags.attach(sweep_cmd, false);
    sweep_cmd->add_option("--heat-dir", sweep_cfg.heat_dir, "Heatmap directory")->required();
    sweep_cmd->add_option("--grad-dir", sweep_cfg.grad_dir, "Gradient map directory")->required();
    sweep_cmd->add_option("--annotations", sweep_annotations, "Ground-truth CSV")->required();
    sweep_cmd->add_option("--t-values", t_values, "Heatmap weights, comma separated")->delimiter(',')->capture_default_str();
    sweep_cmd->add_option("--frac-values", frac_values, "Threshold fractions, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    sweep_cmd->add_option("--thresholds", sweep_cfg.thresholds, "IoU thresholds, comma separated")
        ->delimiter(',')
        ->capture_default_str();
    sweep_cmd->add_option("--workers", sweep_cfg.workers, "Worker threads")->capture_default_str();
    sweep_cmd->add_option("--out", sweep_cfg.out_dir, "Output directory")->capture_default_str();

    // demo
    auto* demo_cmd = app.add_subcommand("demo", "Run the pipeline on a synthetic fixture");
    fs::path demo_out = "out";
    FusionFlags demo_flags;
    demo_flags.attach(demo_cmd);
    demo_cmd->add_option("--out", demo_out, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    const auto isa = kernels::parse_isa(simd);
    if (!isa || !kernels::set_active(*isa)) {
        std::cerr << "error: kernel set '" << simd << "' is not available on this machine\n";
        return kExitUsage;
    }

    try {
        if (*fuse_cmd) {
            const FusionParams p = fuse_flags.resolve();
            p.validate();
            const SaliencyMap heat = scale_to_255(io::load_map(fuse_heat));
            const SaliencyMap grad = scale_to_255(io::load_map(fuse_grad));
            const SaliencyMap fused = fuse(heat, grad, p.t);
            io::save_map(fused, fuse_out);
            if (!fuse_mask_out.empty()) {
                const BinaryMask mask = threshold_mask(fused, p.threshold_frac);
                SaliencyMap as_map(mask.dims());
                for (std::size_t i = 0; i < mask.size(); ++i) as_map.values()[i] = mask.values()[i] ? 255.0 : 0.0;
                io::save_map(as_map, fuse_mask_out);
            }
            std::cout << "wrote " << fuse_out.string() << " (" << fused.width() << "x" << fused.height() << ")\n";
        } else if (*boxgen_cmd) {
            box_cfg.fusion = box_flags.resolve();
            if (!box_annotations.empty()) box_cfg.annotations = box_annotations;
            const auto run = pipeline::cmd_boxgen(box_cfg);
            print_warnings(run.warnings);
            std::cout << run.predictions.size() << " box(es), " << run.failures.size() << " failure(s) -> "
                      << (box_cfg.out_dir / "predictions.csv").string() << '\n';
        } else if (*eval_cmd) {
            std::optional<fs::path> csv;
            if (!eval_out.empty()) csv = fs::path(eval_out) / "eval.csv";
            const auto run = pipeline::cmd_eval(eval_preds, eval_ann, eval_thresholds, csv);
            print_warnings(run.warnings);
            std::cout << format_table_text(run.table);
        } else if (*sweep_cmd) {
            sweep_cfg.fusion = sweep_flags.resolve();
            sweep_cfg.annotations = sweep_annotations;
            const auto run = pipeline::cmd_sweep(sweep_cfg, t_values, frac_values);
            print_warnings(run.warnings);
            std::cout << pipeline::format_sweep_csv(run);
            const auto& best = run.rows[run.best];
            std::printf("best: t=%.2f threshold_frac=%.2f mean_accuracy=%.4f mean_iou=%.4f\n", best.t,
                        best.threshold_frac, best.mean_accuracy, best.mean_iou);
        } else if (*demo_cmd) {
            const auto result = pipeline::cmd_demo(demo_out, demo_flags.resolve());
            std::cout << format_table_text(result.table);
            std::cout << "truth box     " << result.truth << '\n';
            if (result.generated) std::cout << "generated box " << *result.generated << '\n';
            std::printf("IoU %.4f (required >= %.2f), off-class edge %s\n", result.iou, pipeline::kDemoMinIou,
                        result.edge_excluded ? "excluded" : "INCLUDED");
            if (!result.passed) {
                std::cerr << "demo check failed\n";
                return kExitDemo;
            }
        }
    } catch (const DimensionMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const ParameterError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
