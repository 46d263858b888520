#include "crosseai/model_math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>

#include "crosseai/errors.hpp"

namespace crosseai {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Uniform index in [0, n) from a 64-bit engine, without modulo bias.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return static_cast<std::size_t>(v % n);
}

}  // namespace

void Embedding::check() const {
    if (values_.empty()) throw ParameterError("embedding must have dimension >= 1");
}

double cosine_sim(const Embedding& a, const Embedding& b) {
    if (a.dim() != b.dim()) {
        throw ParameterError("cosine_sim: dimension " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    }
    const double na = std::sqrt(dot(a.values(), a.values()));
    const double nb = std::sqrt(dot(b.values(), b.values()));
    if (na == 0.0 || nb == 0.0) throw ParameterError("cosine_sim: zero-norm embedding");
    return std::clamp(dot(a.values(), b.values()) / (na * nb), -1.0, 1.0);
}

double contrastive_loss(const Embedding& query, const Embedding& positive, std::span<const Embedding> negatives,
                        double tau) {
    if (negatives.empty()) throw ParameterError("contrastive_loss: at least one negative required");
    if (!(tau > 0.0)) throw ParameterError("contrastive_loss: tau must be positive");

    const double pos = cosine_sim(query, positive) / tau;
    std::vector<double> logits;
    logits.reserve(negatives.size() + 1);
    logits.push_back(pos);
    for (const Embedding& n : negatives) logits.push_back(cosine_sim(query, n) / tau);

    const double shift = *std::max_element(logits.begin(), logits.end());
    double acc = 0.0;
    for (double l : logits) acc += std::exp(l - shift);
    return (shift - pos) + std::log(acc);
}

double bce_loss(const LabelVector& labels, double epsilon) {
    if (labels.y.size() != labels.y_hat.size()) {
        throw ParameterError("bce_loss: " + std::to_string(labels.y.size()) + " labels vs " +
                             std::to_string(labels.y_hat.size()) + " predictions");
    }
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw ParameterError("bce_loss: epsilon must lie in (0, 0.5)");

    double loss = 0.0;
    for (std::size_t n = 0; n < labels.y.size(); ++n) {
        const std::uint8_t y = labels.y[n];
        if (y > 1) throw ParameterError("bce_loss: labels must be 0 or 1");
        const double p = std::clamp(labels.y_hat[n], epsilon, 1.0 - epsilon);
        loss += y ? -std::log(p) : -std::log1p(-p);
    }
    return loss;
}

double total_loss(double ce, double con, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ParameterError("total_loss: lambda must lie in [0, 1]");
    return lambda * ce + (1.0 - lambda) * con;
}

SampleDraw sample_pairs(std::span<const MetadataRecord> table, const std::string& query_id, const std::string& disease,
                        int k, std::uint64_t seed) {
    if (k < 1) throw ParameterError("sample_pairs: k must be at least 1");

    std::unordered_set<std::string> seen;
    const MetadataRecord* query = nullptr;
    for (const MetadataRecord& r : table) {
        if (!seen.insert(r.image_id).second) throw ParameterError("duplicate image id '" + r.image_id + "'");
        if (r.image_id == query_id) query = &r;
    }
    if (query == nullptr) throw ParameterError("unknown query image '" + query_id + "'");
    if (!query->labels.contains(disease)) {
        throw ParameterError("query image '" + query_id + "' is not labeled '" + disease + "'");
    }

    std::vector<const std::string*> positives;
    std::vector<const std::string*> negatives;
    for (const MetadataRecord& r : table) {
        if (&r == query || !r.labels.contains(disease)) continue;
        (r.patient_id == query->patient_id ? positives : negatives).push_back(&r.image_id);
    }
    if (positives.empty()) throw NoPositiveSample(query_id);
    if (negatives.size() < static_cast<std::size_t>(k)) throw InsufficientNegatives(static_cast<std::size_t>(k), negatives.size());

    std::mt19937_64 rng(seed);
    SampleDraw draw;
    draw.positive = *positives[uniform_index(rng, positives.size())];
    // Partial Fisher-Yates over the eligible negatives.
    for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
        const std::size_t j = i + uniform_index(rng, negatives.size() - i);
        std::swap(negatives[i], negatives[j]);
        draw.negatives.push_back(*negatives[i]);
    }
    return draw;
}

}  // namespace crosseai
