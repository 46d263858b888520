#include "crosseai/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "crosseai/errors.hpp"

namespace crosseai::pipeline {
namespace {

std::string fixed(double v, int digits) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

}  // namespace

EvalRun evaluate(std::span<const PredictionRecord> predictions, std::span<const GroundTruthRecord> truth,
                 std::span<const double> thresholds) {
    std::set<std::string> label_set;
    std::set<std::pair<std::string, std::string>> truth_keys;
    for (const auto& g : truth) {
        label_set.insert(g.label);
        truth_keys.emplace(g.image_id, g.label);
    }

    EvalRun run;
    std::map<std::string, std::size_t> unknown;
    std::size_t unmatched = 0;
    std::vector<PredictionRecord> kept;
    for (const auto& p : predictions) {
        if (!label_set.contains(p.label)) {
            ++unknown[p.label];
            continue;
        }
        if (!truth_keys.contains({p.image_id, p.label})) ++unmatched;
        kept.push_back(p);
    }
    for (const auto& [label, n] : unknown) {
        run.warnings.push_back("label '" + label + "' not in annotations; excluded " + std::to_string(n) +
                               " prediction(s)");
    }
    if (unmatched > 0) {
        run.warnings.push_back(std::to_string(unmatched) + " prediction(s) have no ground truth and were ignored");
    }

    const std::vector<std::string> labels(label_set.begin(), label_set.end());
    run.table = accuracy_table(kept, truth, thresholds, labels);
    return run;
}

EvalRun cmd_eval(const fs::path& predictions, const fs::path& annotations, std::span<const double> thresholds,
                 const std::optional<fs::path>& out_csv) {
    validate_thresholds(thresholds);
    const auto preds = io::read_predictions(predictions);
    const auto truth = io::read_annotations(annotations);
    EvalRun run = evaluate(preds, truth, thresholds);
    if (out_csv) {
        if (out_csv->has_parent_path()) {
            std::error_code ec;
            fs::create_directories(out_csv->parent_path(), ec);
            if (ec) throw IoError("cannot create '" + out_csv->parent_path().string() + "': " + ec.message());
        }
        io::write_text(*out_csv, format_table_csv(run.table));
    }
    return run;
}

SweepRun cmd_sweep(const RunConfig& config, std::span<const double> t_values, std::span<const double> frac_values) {
    if (t_values.empty() || frac_values.empty()) throw ParameterError("sweep grid is empty");
    config.validate();
    for (double t : t_values) {
        FusionParams p = config.fusion;
        p.t = t;
        p.validate();
    }
    for (double f : frac_values) {
        FusionParams p = config.fusion;
        p.threshold_frac = f;
        p.validate();
    }
    if (!config.annotations) throw ParameterError("sweep requires an annotation file");

    const auto truth = io::read_annotations(*config.annotations);
    const auto jobs = discover_jobs(config.heat_dir, config.grad_dir);
    const auto pairs = load_pairs(jobs, config.workers);

    SweepRun sweep;
    sweep.thresholds = config.thresholds;
    if (pairs.empty()) sweep.warnings.push_back("no input maps found");
    for (double t : t_values) {
        for (double frac : frac_values) {
            FusionParams params = config.fusion;
            params.t = t;
            params.threshold_frac = frac;
            const BoxgenRun boxes = generate_all(pairs, params, config.workers);
            const EvalRun eval = evaluate(boxes.predictions, truth, config.thresholds);

            SweepRow row;
            row.t = t;
            row.threshold_frac = frac;
            double total = 0.0;
            std::size_t n = 0;
            for (const auto& m : eval.table.mean) {
                row.per_threshold.push_back(m.value_or(0.0));
                if (m) {
                    total += *m;
                    ++n;
                }
            }
            row.mean_accuracy = n > 0 ? total / static_cast<double>(n) : 0.0;

            const std::vector<std::string> labels = eval.table.labels;
            std::vector<PredictionRecord> kept;
            for (const auto& p : boxes.predictions) {
                if (std::binary_search(labels.begin(), labels.end(), p.label)) kept.push_back(p);
            }
            const std::vector<double> ious = match_ious(kept, truth);
            row.mean_iou = ious.empty() ? 0.0 : std::accumulate(ious.begin(), ious.end(), 0.0) / static_cast<double>(ious.size());
            sweep.rows.push_back(std::move(row));
        }
    }

    for (std::size_t i = 1; i < sweep.rows.size(); ++i) {
        const SweepRow& r = sweep.rows[i];
        const SweepRow& b = sweep.rows[sweep.best];
        if (r.mean_accuracy > b.mean_accuracy || (r.mean_accuracy == b.mean_accuracy && r.mean_iou > b.mean_iou)) {
            sweep.best = i;
        }
    }

    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + config.out_dir.string() + "': " + ec.message());
    io::write_text(config.out_dir / "sweep.csv", format_sweep_csv(sweep));
    return sweep;
}

std::string format_sweep_csv(const SweepRun& run) {
    std::ostringstream os;
    os << "t,threshold_frac,mean_accuracy,mean_iou";
    for (double t : run.thresholds) os << ",acc@" << fixed(t, 2);
    os << '\n';
    for (const SweepRow& r : run.rows) {
        os << fixed(r.t, 4) << ',' << fixed(r.threshold_frac, 4) << ',' << fixed(r.mean_accuracy, 6) << ','
           << fixed(r.mean_iou, 6);
        for (double v : r.per_threshold) os << ',' << fixed(v, 6);
        os << '\n';
    }
    return os.str();
}

}  // namespace crosseai::pipeline
