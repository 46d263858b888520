#include "crosseai/pipeline.hpp"

#include <cmath>
#include <cstdint>

#include "crosseai/errors.hpp"
#include "crosseai/io/map_file.hpp"

namespace crosseai::pipeline {
namespace {

constexpr int kSize = 128;

// Stateless per-pixel noise in [0, 1).
double hash_unit(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace

DemoFixture make_demo_fixture() {
    const BoundingBox lesion{70, 40, 110, 72};
    const int edge_column = 12;
    const double cx = 0.5 * (lesion.x1 + lesion.x2);
    const double cy = 0.5 * (lesion.y1 + lesion.y2);
    const double sigma = 18.0;

    SaliencyMap heat(kSize, kSize);
    SaliencyMap grad(kSize, kSize);
    for (int y = 0; y < kSize; ++y) {
        for (int x = 0; x < kSize; ++x) {
            const double dx = x + 0.5 - cx;
            const double dy = y + 0.5 - cy;
            // Coarse class activation spilling well past the lesion.
            heat.at(x, y) = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));

            const double noise = hash_unit(static_cast<std::uint64_t>(y) * kSize + x);
            double g = 0.08 * noise;  // background texture
            if (lesion.contains_pixel(x, y)) g = 0.7 + 0.3 * noise;
            if (x == edge_column && y >= 10 && y < kSize - 10) g = 0.9;  // edge of another finding
            grad.at(x, y) = g;
        }
    }
    return DemoFixture{"demo_0001.png", "Mass", std::move(heat), std::move(grad), lesion, edge_column};
}

DemoResult cmd_demo(const fs::path& out_dir, const FusionParams& params) {
    params.validate();
    const DemoFixture fx = make_demo_fixture();
    const fs::path root = out_dir / "demo";
    const fs::path heat_dir = root / "heat";
    const fs::path grad_dir = root / "grad";

    std::error_code ec;
    for (const fs::path& d : {heat_dir / fx.label, grad_dir / fx.label}) {
        fs::create_directories(d, ec);
        if (ec) throw IoError("cannot create '" + d.string() + "': " + ec.message());
    }
    io::save_map(fx.heat, heat_dir / fx.label / (fx.image_id + ".npy"));
    io::save_map(fx.grad, grad_dir / fx.label / (fx.image_id + ".npy"));

    const GroundTruthRecord truth{fx.image_id, fx.label, fx.lesion, fx.heat.dims()};
    const fs::path annotations = root / "annotations.csv";
    io::write_annotations(annotations, std::span(&truth, 1));

    RunConfig config;
    config.fusion = params;
    config.heat_dir = heat_dir;
    config.grad_dir = grad_dir;
    config.annotations = annotations;
    config.out_dir = root / "run";
    config.overlays = true;
    const BoxgenRun boxes = cmd_boxgen(config);
    const EvalRun eval = cmd_eval(config.out_dir / "predictions.csv", annotations, config.thresholds,
                                  config.out_dir / "eval.csv");

    DemoResult result;
    result.truth = fx.lesion;
    result.table = eval.table;
    if (!boxes.predictions.empty()) {
        const BoundingBox box = boxes.predictions.front().box;
        result.generated = box;
        result.iou = iou(box, fx.lesion);
        result.edge_excluded = !(box.x1 <= fx.edge_column && fx.edge_column < box.x2);
    }
    result.passed = result.generated && result.iou >= kDemoMinIou && result.edge_excluded;
    return result;
}

}  // namespace crosseai::pipeline
