#include "crosseai/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <utility>

#include "crosseai/errors.hpp"

namespace crosseai {
namespace {

using Key = std::pair<std::string, std::string>;

void require_box(const BoundingBox& b, Dims d, const std::string& what) {
    if (!b.valid_within(d)) {
        std::ostringstream os;
        os << what << ": box " << b << " not inside " << d.width << "x" << d.height;
        throw ParameterError(os.str());
    }
}

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

std::vector<double> default_iou_thresholds() { return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}; }

void validate_thresholds(std::span<const double> thresholds) {
    if (thresholds.empty()) throw ParameterError("threshold list is empty");
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        const double t = thresholds[i];
        if (!(t > 0.0 && t < 1.0)) throw ParameterError("IoU threshold " + std::to_string(t) + " not in (0, 1)");
        if (i > 0 && !(t > thresholds[i - 1])) throw ParameterError("IoU thresholds must be strictly increasing");
    }
}

double iou(const BoundingBox& a, const BoundingBox& b) {
    const long long iw = std::max(0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
    const long long ih = std::max(0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
    const long long inter = iw * ih;
    const long long uni = a.area() + b.area() - inter;
    if (uni <= 0) return 0.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

BoundingBox scale_box(const BoundingBox& box, Dims from, Dims to) {
    if (from.width < 1 || from.height < 1) throw ParameterError("scale_box: source dimensions must be positive");
    if (to.width < 1 || to.height < 1) throw ParameterError("scale_box: target dimensions must be positive");
    require_box(box, from, "scale_box");

    const auto floor_scale = [](long long v, long long num, long long den) { return static_cast<int>(v * num / den); };
    const auto ceil_scale = [](long long v, long long num, long long den) {
        return static_cast<int>((v * num + den - 1) / den);
    };
    return BoundingBox{floor_scale(box.x1, to.width, from.width), floor_scale(box.y1, to.height, from.height),
                       ceil_scale(box.x2, to.width, from.width), ceil_scale(box.y2, to.height, from.height)};
}

std::vector<double> match_ious(std::span<const PredictionRecord> preds, std::span<const GroundTruthRecord> truth) {
    std::map<Key, const PredictionRecord*> by_key;
    for (const PredictionRecord& p : preds) {
        require_box(p.box, p.map_dims, "prediction for '" + p.image_id + "'");
        if (!by_key.emplace(Key{p.image_id, p.label}, &p).second) {
            throw ParameterError("duplicate prediction for (" + p.image_id + ", " + p.label + ")");
        }
    }

    std::map<Key, bool> seen;
    std::vector<double> out;
    out.reserve(truth.size());
    for (const GroundTruthRecord& g : truth) {
        require_box(g.box, g.image_dims, "ground truth for '" + g.image_id + "'");
        if (!seen.emplace(Key{g.image_id, g.label}, true).second) {
            throw ParameterError("duplicate ground truth for (" + g.image_id + ", " + g.label + ")");
        }
        const auto it = by_key.find(Key{g.image_id, g.label});
        if (it == by_key.end()) {
            out.push_back(0.0);
            continue;
        }
        const PredictionRecord& p = *it->second;
        out.push_back(iou(scale_box(p.box, p.map_dims, g.image_dims), g.box));
    }
    return out;
}

EvalTable accuracy_table(std::span<const PredictionRecord> preds, std::span<const GroundTruthRecord> truth,
                         std::span<const double> thresholds, std::span<const std::string> labels) {
    validate_thresholds(thresholds);
    const std::vector<double> ious = match_ious(preds, truth);

    std::map<std::string, std::size_t> column;
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (!column.emplace(labels[j], j).second) throw ParameterError("duplicate label '" + labels[j] + "'");
    }

    EvalTable table;
    table.thresholds.assign(thresholds.begin(), thresholds.end());
    table.labels.assign(labels.begin(), labels.end());
    table.support.assign(labels.size(), 0);
    std::vector<std::vector<std::size_t>> hits(thresholds.size(), std::vector<std::size_t>(labels.size(), 0));

    for (std::size_t r = 0; r < truth.size(); ++r) {
        const auto col = column.find(truth[r].label);
        if (col == column.end()) continue;
        ++table.support[col->second];
        for (std::size_t i = 0; i < thresholds.size(); ++i) {
            if (ious[r] >= thresholds[i]) ++hits[i][col->second];
        }
    }

    for (std::size_t i = 0; i < thresholds.size(); ++i) {
        std::vector<std::optional<double>> row(labels.size());
        double total = 0.0;
        std::size_t available = 0;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (table.support[j] == 0) continue;
            row[j] = static_cast<double>(hits[i][j]) / static_cast<double>(table.support[j]);
            total += *row[j];
            ++available;
        }
        table.accuracy.push_back(std::move(row));
        table.mean.push_back(available > 0 ? std::optional<double>(total / static_cast<double>(available)) : std::nullopt);
    }
    return table;
}

std::string format_table_text(const EvalTable& table) {
    std::size_t label_width = 4;  // "Mean"
    for (const std::string& l : table.labels) label_width = std::max(label_width, l.size());

    const auto cell = [](const std::optional<double>& v) { return v ? fixed2(*v) : std::string("n/a"); };
    std::ostringstream os;
    const auto line = [&](const std::string& t, const std::string& label, const std::string& value) {
        os << t << std::string(8 - t.size(), ' ') << label << std::string(label_width + 2 - label.size(), ' ') << value
           << '\n';
    };
    line("T(IoU)", "Label", "Accuracy");
    for (std::size_t i = 0; i < table.thresholds.size(); ++i) {
        os << std::string(8 + label_width + 2 + 8, '-') << '\n';
        for (std::size_t j = 0; j < table.labels.size(); ++j) {
            line(j == 0 ? fixed2(table.thresholds[i]) : std::string(), table.labels[j], cell(table.accuracy[i][j]));
        }
        line(table.labels.empty() ? fixed2(table.thresholds[i]) : std::string(), "Mean", cell(table.mean[i]));
    }
    return os.str();
}

std::string format_table_csv(const EvalTable& table) {
    std::ostringstream os;
    os << "iou_threshold,label,accuracy,support\n";
    for (std::size_t i = 0; i < table.thresholds.size(); ++i) {
        std::size_t total_support = 0;
        for (std::size_t j = 0; j < table.labels.size(); ++j) {
            const auto& v = table.accuracy[i][j];
            os << fixed2(table.thresholds[i]) << ',' << table.labels[j] << ',' << (v ? fixed2(*v) : "n/a") << ','
               << table.support[j] << '\n';
            total_support += table.support[j];
        }
        os << fixed2(table.thresholds[i]) << ",Mean," << (table.mean[i] ? fixed2(*table.mean[i]) : "n/a") << ','
           << total_support << '\n';
    }
    return os.str();
}

}  // namespace crosseai
