#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "crosseai/errors.hpp"
#include "crosseai/io/map_file.hpp"
#include "crosseai/pipeline.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace crosseai;
using namespace crosseai::pipeline;
using crosseai::testing::read_bytes;
using crosseai::testing::TempDir;
using crosseai::testing::write_bytes;

namespace {

void save_at(const SaliencyMap& m, const fs::path& p) {
    fs::create_directories(p.parent_path());
    io::save_map(m, p);
}

struct Dataset {
    fs::path heat_dir;
    fs::path grad_dir;
    fs::path annotations;
    std::vector<GroundTruthRecord> truth;
};

// Random blobs with known boxes, a few labels, mixed NPY and PGM inputs.
Dataset make_dataset(const fs::path& root, int n, std::uint64_t seed) {
    Dataset ds{root / "heat", root / "grad", root / "ann.csv", {}};
    std::mt19937_64 rng(seed);
    const std::vector<std::string> labels{"Mass", "Nodule", "Effusion"};
    for (int i = 0; i < n; ++i) {
        const int size = 48 + static_cast<int>(rng() % 32);
        const int w = 8 + static_cast<int>(rng() % 16);
        const int h = 8 + static_cast<int>(rng() % 16);
        const int x1 = 2 + static_cast<int>(rng() % (size - w - 4));
        const int y1 = 2 + static_cast<int>(rng() % (size - h - 4));
        const BoundingBox box{x1, y1, x1 + w, y1 + h};
        SaliencyMap heat(size, size);
        SaliencyMap grad(size, size);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int y = 0; y < size; ++y) {
            for (int x = 0; x < size; ++x) {
                const double dx = x + 0.5 - 0.5 * (box.x1 + box.x2);
                const double dy = y + 0.5 - 0.5 * (box.y1 + box.y2);
                heat.at(x, y) = std::exp(-(dx * dx + dy * dy) / (2.0 * 10.0 * 10.0));
                grad.at(x, y) = box.contains_pixel(x, y) ? 0.6 + 0.4 * u(rng) : 0.1 * u(rng);
            }
        }
        char id[32];
        std::snprintf(id, sizeof id, "img_%03d.png", i);
        const std::string label = labels[i % labels.size()];
        const std::string ext = i % 4 == 3 ? ".pgm" : ".npy";
        save_at(heat, ds.heat_dir / label / (id + ext));
        save_at(grad, ds.grad_dir / label / (id + ext));
        ds.truth.push_back({id, label, box, {size, size}});
    }
    io::write_annotations(ds.annotations, ds.truth);
    return ds;
}

RunConfig config_for(const Dataset& ds, const fs::path& out, int workers = 1) {
    RunConfig c;
    c.heat_dir = ds.heat_dir;
    c.grad_dir = ds.grad_dir;
    c.annotations = ds.annotations;
    c.out_dir = out;
    c.workers = workers;
    return c;
}

}  // namespace

TEST(Boxgen, EmptyInputGivesHeaderOnlyCsvAndWarning) {
    TempDir dir;
    fs::create_directories(dir / "heat");
    fs::create_directories(dir / "grad");
    RunConfig c;
    c.heat_dir = dir / "heat";
    c.grad_dir = dir / "grad";
    c.out_dir = dir / "out";
    const auto run = cmd_boxgen(c);
    EXPECT_TRUE(run.predictions.empty());
    ASSERT_EQ(run.warnings.size(), 1u);
    EXPECT_EQ(read_bytes(dir / "out" / "predictions.csv"), "image_id,label,x1,y1,x2,y2,map_w,map_h\n");
}

TEST(Boxgen, MissingInputDirIsAnIoError) {
    TempDir dir;
    RunConfig c;
    c.heat_dir = dir / "nope";
    c.grad_dir = dir / "nope";
    c.out_dir = dir / "out";
    EXPECT_THROW(cmd_boxgen(c), IoError);
}

TEST(Boxgen, BadPairsAreRecordedAndOthersUnaffected) {
    TempDir dir;
    const Dataset ds = make_dataset(dir.path(), 4, 5);
    const auto clean = cmd_boxgen(config_for(ds, dir / "clean"));
    ASSERT_EQ(clean.predictions.size(), 4u);

    save_at(SaliencyMap(10, 12, 1.0), ds.heat_dir / "Mass" / "bad.png.npy");
    save_at(SaliencyMap(12, 10, 1.0), ds.grad_dir / "Mass" / "bad.png.npy");
    save_at(SaliencyMap(10, 10, 1.0), ds.heat_dir / "Mass" / "lonely.png.npy");
    write_bytes(ds.grad_dir / "Nodule" / "broken.png.npy", "not a map");
    save_at(SaliencyMap(10, 10, 1.0), ds.heat_dir / "Nodule" / "broken.png.npy");

    const auto run = cmd_boxgen(config_for(ds, dir / "out"));
    EXPECT_EQ(run.predictions, clean.predictions);
    ASSERT_EQ(run.failures.size(), 3u);
    EXPECT_EQ(run.failures[0].image_id, "bad.png");
    EXPECT_NE(run.failures[0].reason.find("dimension"), std::string::npos) << run.failures[0].reason;
    EXPECT_EQ(run.failures[1].image_id, "broken.png");
    EXPECT_EQ(run.failures[2].image_id, "lonely.png");
    EXPECT_EQ(run.failures[2].reason, "missing gradient map");
    EXPECT_NE(read_bytes(dir / "out" / "failures.csv").find("lonely.png,Mass,missing gradient map"), std::string::npos);
}

TEST(Boxgen, FlatMapIsAFailureNotACrash) {
    TempDir dir;
    save_at(SaliencyMap(8, 8, 0.0), dir / "heat" / "Mass" / "flat.npy");
    save_at(SaliencyMap(8, 8, 0.0), dir / "grad" / "Mass" / "flat.npy");
    RunConfig c;
    c.heat_dir = dir / "heat";
    c.grad_dir = dir / "grad";
    c.out_dir = dir / "out";
    const auto run = cmd_boxgen(c);
    EXPECT_TRUE(run.predictions.empty());
    ASSERT_EQ(run.failures.size(), 1u);
}

TEST(Boxgen, OutputIsIndependentOfWorkerCount) {
    TempDir dir;
    const Dataset ds = make_dataset(dir.path(), 24, 11);
    cmd_boxgen(config_for(ds, dir / "w1", 1));
    cmd_boxgen(config_for(ds, dir / "w4", 4));
    cmd_boxgen(config_for(ds, dir / "w7", 7));
    const std::string ref = read_bytes(dir / "w1" / "predictions.csv");
    EXPECT_EQ(std::count(ref.begin(), ref.end(), '\n'), 25);
    EXPECT_EQ(read_bytes(dir / "w4" / "predictions.csv"), ref);
    EXPECT_EQ(read_bytes(dir / "w7" / "predictions.csv"), ref);
}

TEST(Boxgen, WritesOverlays) {
    TempDir dir;
    const Dataset ds = make_dataset(dir.path(), 2, 3);
    auto c = config_for(ds, dir / "out");
    c.overlays = true;
    cmd_boxgen(c);
    EXPECT_TRUE(fs::exists(dir / "out" / "overlays" / "Mass" / "img_000.png.png"));
    EXPECT_TRUE(fs::exists(dir / "out" / "overlays" / "Nodule" / "img_001.png.png"));
}

TEST(Boxgen, RecoversSyntheticBlobs) {
    TempDir dir;
    const Dataset ds = make_dataset(dir.path(), 12, 29);
    const auto run = cmd_boxgen(config_for(ds, dir / "out"));
    ASSERT_EQ(run.predictions.size(), ds.truth.size());
    for (const auto& p : run.predictions) {
        const auto it = std::find_if(ds.truth.begin(), ds.truth.end(),
                                     [&](const auto& t) { return t.image_id == p.image_id; });
        ASSERT_NE(it, ds.truth.end());
        EXPECT_GE(iou(p.box, it->box), 0.5) << p.image_id << " " << p.box << " vs " << it->box;
    }
}

TEST(Eval, PredictionsEqualToAnnotationsScoreOne) {
    TempDir dir;
    const Dataset ds = make_dataset(dir.path(), 6, 2);
    std::vector<PredictionRecord> preds;
    for (const auto& t : ds.truth) preds.push_back({t.image_id, t.label, t.box, t.image_dims});
    io::write_predictions(dir / "p.csv", preds);
    const auto thresholds = default_iou_thresholds();
    const auto run = cmd_eval(dir / "p.csv", ds.annotations, thresholds, dir / "eval.csv");
    for (const auto& row : run.table.accuracy)
        for (const auto& cell : row) EXPECT_EQ(cell, 1.0);
    EXPECT_TRUE(run.warnings.empty());
    EXPECT_TRUE(fs::exists(dir / "eval.csv"));
}

TEST(Eval, HandCountedFixture) {
    TempDir dir;
    std::vector<GroundTruthRecord> truth;
    std::vector<PredictionRecord> preds;
    const int heights[] = {15, 35, 55, 5};
    for (int i = 0; i < 4; ++i) {
        const std::string id = "f" + std::to_string(i);
        truth.push_back({id, "Mass", {0, 0, 100, 100}, {100, 100}});
        preds.push_back({id, "Mass", {0, 0, 100, heights[i]}, {100, 100}});
    }
    io::write_annotations(dir / "a.csv", truth);
    io::write_predictions(dir / "p.csv", preds);
    const std::vector<double> thresholds{0.1, 0.3, 0.5};
    const auto run = cmd_eval(dir / "p.csv", dir / "a.csv", thresholds);
    EXPECT_DOUBLE_EQ(*run.table.accuracy[0][0], 0.75);
    EXPECT_DOUBLE_EQ(*run.table.accuracy[1][0], 0.50);
    EXPECT_DOUBLE_EQ(*run.table.accuracy[2][0], 0.25);
}

TEST(Eval, EmptyPredictionsScoreZero) {
    TempDir dir;
    const Dataset ds = make_dataset(dir.path(), 3, 9);
    io::write_predictions(dir / "p.csv", {});
    const auto thresholds = default_iou_thresholds();
    const auto run = cmd_eval(dir / "p.csv", ds.annotations, thresholds);
    for (const auto& row : run.table.accuracy)
        for (const auto& cell : row) EXPECT_EQ(cell, 0.0);
    for (const auto& m : run.table.mean) EXPECT_EQ(m, 0.0);
}

TEST(Eval, UnknownLabelWarnsAndIsExcluded) {
    TempDir dir;
    const std::vector<GroundTruthRecord> truth{{"a", "Mass", {0, 0, 10, 10}, {20, 20}}};
    const std::vector<PredictionRecord> preds{{"a", "Mass", {0, 0, 10, 10}, {20, 20}},
                                              {"a", "Hernia", {0, 0, 10, 10}, {20, 20}}};
    const auto thresholds = default_iou_thresholds();
    const auto run = evaluate(preds, truth, thresholds);
    EXPECT_EQ(run.table.labels, std::vector<std::string>{"Mass"});
    ASSERT_EQ(run.warnings.size(), 1u);
    EXPECT_NE(run.warnings[0].find("Hernia"), std::string::npos);
}

TEST(Sweep, SinglePointMatchesBoxgenThenEval) {
    TempDir dir;
    const Dataset ds = make_dataset(dir.path(), 9, 21);
    auto c = config_for(ds, dir / "out");
    cmd_boxgen(c);
    const auto eval = cmd_eval(dir / "out" / "predictions.csv", ds.annotations, c.thresholds);
    const double t[] = {0.30};
    const double f[] = {0.35};
    const auto sweep = cmd_sweep(c, t, f);
    ASSERT_EQ(sweep.rows.size(), 1u);
    ASSERT_EQ(sweep.rows[0].per_threshold.size(), eval.table.mean.size());
    for (std::size_t i = 0; i < eval.table.mean.size(); ++i)
        EXPECT_EQ(sweep.rows[0].per_threshold[i], eval.table.mean[i]);
    EXPECT_TRUE(fs::exists(dir / "out" / "sweep.csv"));
}

TEST(Sweep, ReportsTheBestPointOnTheDemoFixture) {
    TempDir dir;
    const DemoFixture fx = make_demo_fixture();
    save_at(fx.heat, dir / "heat" / fx.label / (fx.image_id + ".npy"));
    save_at(fx.grad, dir / "grad" / fx.label / (fx.image_id + ".npy"));
    const GroundTruthRecord truth{fx.image_id, fx.label, fx.lesion, fx.heat.dims()};
    io::write_annotations(dir / "ann.csv", std::span(&truth, 1));

    RunConfig c;
    c.heat_dir = dir / "heat";
    c.grad_dir = dir / "grad";
    c.annotations = dir / "ann.csv";
    c.out_dir = dir / "out";
    const std::vector<double> ts{0.0, 0.3, 0.6, 1.0};
    const std::vector<double> fs_{0.2, 0.35, 0.5, 0.8};
    const auto sweep = cmd_sweep(c, ts, fs_);
    ASSERT_EQ(sweep.rows.size(), 16u);

    // Exhaustive reference: IoU of each grid point computed directly.
    double best_iou = -1.0;
    for (double t : ts) {
        for (double f : fs_) {
            FusionParams p;
            p.t = t;
            p.threshold_frac = f;
            double v = 0.0;
            try {
                v = iou(generate_bbox(fx.heat, fx.grad, p), fx.lesion);
            } catch (const NoLocalizableRegion&) {
            }
            best_iou = std::max(best_iou, v);
        }
    }
    EXPECT_DOUBLE_EQ(sweep.rows[sweep.best].mean_iou, best_iou);
    for (const auto& row : sweep.rows) EXPECT_LE(row.mean_accuracy, sweep.rows[sweep.best].mean_accuracy);
}

TEST(Sweep, EmptyGridIsAUsageError) {
    TempDir dir;
    const Dataset ds = make_dataset(dir.path(), 1, 1);
    const std::vector<double> some{0.3};
    EXPECT_THROW(cmd_sweep(config_for(ds, dir / "out"), {}, some), ParameterError);
    EXPECT_THROW(cmd_sweep(config_for(ds, dir / "out"), some, {}), ParameterError);
}

TEST(Demo, PassesAndIsDeterministic) {
    TempDir a;
    TempDir b;
    const auto ra = cmd_demo(a.path());
    const auto rb = cmd_demo(b.path());
    EXPECT_TRUE(ra.passed);
    EXPECT_GE(ra.iou, kDemoMinIou);
    EXPECT_TRUE(ra.edge_excluded);
    ASSERT_TRUE(ra.generated);
    EXPECT_TRUE(ra.generated->contains_pixel((ra.truth.x1 + ra.truth.x2) / 2, (ra.truth.y1 + ra.truth.y2) / 2));
    EXPECT_EQ(ra.generated, rb.generated);
    for (const char* f : {"run/predictions.csv", "run/eval.csv", "heat/Mass/demo_0001.png.npy", "run/overlays/Mass/demo_0001.png.png"})
        EXPECT_EQ(read_bytes(a.path() / "demo" / f), read_bytes(b.path() / "demo" / f)) << f;
}

TEST(Demo, UnwritableOutputIsAnIoErrorNamingThePath) {
    TempDir dir;
    write_bytes(dir / "file", "x");
    try {
        cmd_demo(dir / "file" / "sub");
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find((dir / "file").string()), std::string::npos) << e.what();
    }
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}
