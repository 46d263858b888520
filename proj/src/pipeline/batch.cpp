#include "crosseai/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <set>
#include <thread>
#include <tuple>

#include "crosseai/errors.hpp"
#include "crosseai/io/map_file.hpp"
#include "crosseai/io/overlay.hpp"

namespace crosseai::pipeline {
namespace {

using Key = std::pair<std::string, std::string>;

// image id -> path for every map file under dir/<label>/.
std::map<Key, fs::path> scan(const fs::path& dir) {
    std::map<Key, fs::path> found;
    if (!fs::is_directory(dir)) throw IoError("input directory '" + dir.string() + "' does not exist");
    for (const auto& label_dir : fs::directory_iterator(dir)) {
        if (!label_dir.is_directory()) continue;
        const std::string label = label_dir.path().filename().string();
        for (const auto& entry : fs::directory_iterator(label_dir.path())) {
            if (!entry.is_regular_file() || !io::is_map_file(entry.path())) continue;
            const Key key{entry.path().stem().string(), label};
            auto [it, inserted] = found.emplace(key, entry.path());
            // Both foo.npy and foo.pgm present: prefer NPY.
            if (!inserted && entry.path().extension() == ".npy") it->second = entry.path();
        }
    }
    return found;
}

bool key_less(const std::string& ia, const std::string& la, const std::string& ib, const std::string& lb) {
    return std::tie(ia, la) < std::tie(ib, lb);
}

}  // namespace

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
}

void RunConfig::validate() const {
    fusion.validate();
    validate_thresholds(thresholds);
    if (workers < 1) throw ParameterError("workers must be at least 1");
}

std::vector<MapJob> discover_jobs(const fs::path& heat_dir, const fs::path& grad_dir) {
    const auto heats = scan(heat_dir);
    const auto grads = scan(grad_dir);
    std::set<Key> keys;
    for (const auto& [k, _] : heats) keys.insert(k);
    for (const auto& [k, _] : grads) keys.insert(k);

    std::vector<MapJob> jobs;
    for (const Key& k : keys) {
        MapJob job{k.first, k.second, {}, {}};
        if (auto it = heats.find(k); it != heats.end()) job.heat = it->second;
        if (auto it = grads.find(k); it != grads.end()) job.grad = it->second;
        jobs.push_back(std::move(job));
    }
    return jobs;
}

std::vector<LoadedPair> load_pairs(std::span<const MapJob> jobs, int workers) {
    std::vector<LoadedPair> pairs(jobs.size());
    parallel_for(jobs.size(), workers, [&](std::size_t i) {
        const MapJob& job = jobs[i];
        LoadedPair& p = pairs[i];
        p.image_id = job.image_id;
        p.label = job.label;
        if (job.heat.empty()) {
            p.error = "missing heatmap";
            return;
        }
        if (job.grad.empty()) {
            p.error = "missing gradient map";
            return;
        }
        try {
            p.heat = io::load_map(job.heat);
            p.grad = io::load_map(job.grad);
        } catch (const std::exception& e) {
            p.heat.reset();
            p.grad.reset();
            p.error = e.what();
        }
    });
    return pairs;
}

BoxgenRun generate_all(std::span<const LoadedPair> pairs, const FusionParams& params, int workers,
                       const std::optional<OverlayOptions>& overlays) {
    params.validate();

    std::map<Key, const GroundTruthRecord*> truth_by_key;
    if (overlays) {
        for (const auto& g : overlays->truth) truth_by_key.emplace(Key{g.image_id, g.label}, &g);
        std::set<std::string> labels;
        for (const auto& p : pairs) labels.insert(p.label);
        for (const auto& l : labels) {
            std::error_code ec;
            fs::create_directories(overlays->dir / l, ec);
            if (ec) throw IoError("cannot create '" + (overlays->dir / l).string() + "': " + ec.message());
        }
    }

    struct Outcome {
        std::optional<PredictionRecord> prediction;
        std::optional<io::FailureRecord> failure;
    };
    std::vector<Outcome> outcomes(pairs.size());

    parallel_for(pairs.size(), workers, [&](std::size_t i) {
        const LoadedPair& p = pairs[i];
        Outcome& out = outcomes[i];
        if (!p.error.empty()) {
            out.failure = io::FailureRecord{p.image_id, p.label, p.error};
            return;
        }
        try {
            const BoxgenTrace trace = trace_bbox(*p.heat, *p.grad, params);
            out.prediction = PredictionRecord{p.image_id, p.label, trace.box, p.heat->dims()};
            if (overlays) {
                std::optional<BoundingBox> truth;
                if (auto it = truth_by_key.find(Key{p.image_id, p.label}); it != truth_by_key.end()) {
                    truth = scale_box(it->second->box, it->second->image_dims, p.heat->dims());
                }
                io::write_png(io::render_overlay(trace.fused, trace.box, truth),
                              overlays->dir / p.label / (p.image_id + ".png"));
            }
        } catch (const std::exception& e) {
            out.prediction.reset();
            out.failure = io::FailureRecord{p.image_id, p.label, e.what()};
        }
    });

    BoxgenRun run;
    for (auto& o : outcomes) {
        if (o.prediction) run.predictions.push_back(std::move(*o.prediction));
        if (o.failure) run.failures.push_back(std::move(*o.failure));
    }
    std::sort(run.predictions.begin(), run.predictions.end(), [](const auto& a, const auto& b) {
        return key_less(a.image_id, a.label, b.image_id, b.label);
    });
    std::sort(run.failures.begin(), run.failures.end(), [](const auto& a, const auto& b) {
        return key_less(a.image_id, a.label, b.image_id, b.label);
    });
    if (pairs.empty()) run.warnings.push_back("no input maps found");
    if (!run.failures.empty()) {
        run.warnings.push_back(std::to_string(run.failures.size()) + " image(s) failed; see failures.csv");
    }
    return run;
}

BoxgenRun cmd_boxgen(const RunConfig& config) {
    config.validate();
    const auto jobs = discover_jobs(config.heat_dir, config.grad_dir);
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + config.out_dir.string() + "': " + ec.message());

    const auto pairs = load_pairs(jobs, config.workers);

    std::vector<GroundTruthRecord> truth;
    std::optional<OverlayOptions> overlays;
    if (config.overlays) {
        if (config.annotations) truth = io::read_annotations(*config.annotations);
        overlays = OverlayOptions{config.out_dir / "overlays", truth};
    }

    BoxgenRun run = generate_all(pairs, config.fusion, config.workers, overlays);
    io::write_predictions(config.out_dir / "predictions.csv", run.predictions);
    io::write_failures(config.out_dir / "failures.csv", run.failures);
    return run;
}

}  // namespace crosseai::pipeline
