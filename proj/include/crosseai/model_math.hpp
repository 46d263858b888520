#pragma once

// Training-objective formulas and the patient-metadata sampler, as pure
// numeric functions.

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace crosseai {

class Embedding {
public:
    Embedding(std::initializer_list<double> v) : values_(v) { check(); }
    explicit Embedding(std::vector<double> v) : values_(std::move(v)) { check(); }

    std::span<const double> values() const noexcept { return values_; }
    std::size_t dim() const noexcept { return values_.size(); }

private:
    void check() const;
    std::vector<double> values_;
};

struct LabelVector {
    std::vector<std::uint8_t> y;  // ground truth per class, 0 or 1
    std::vector<double> y_hat;    // predicted probability per class
};

struct LossParams {
    double tau = 1.0;
    double lambda = 0.80;
    int k = 1;
    double epsilon = 1e-12;
};

/// dot(a, b) / (|a| |b|). Throws ParameterError for a zero-norm input or
/// mismatched dimensions.
double cosine_sim(const Embedding& a, const Embedding& b);

/// Normalized contrastive loss of a query against one positive and a set of
/// negatives at temperature tau:
///
///   -log( exp(s_pos/tau) / (exp(s_pos/tau) + sum_neg exp(s_neg/tau)) )
///
/// with s = cosine similarity to the query. The positive term sits in the
/// denominator, so the result is never negative. Evaluated through a
/// shifted log-sum-exp.
double contrastive_loss(const Embedding& query, const Embedding& positive, std::span<const Embedding> negatives,
                        double tau);

/// Summed per-class binary cross-entropy with predictions clamped into
/// [epsilon, 1 - epsilon].
double bce_loss(const LabelVector& labels, double epsilon = 1e-12);

// lambda * ce + (1 - lambda) * con
double total_loss(double ce, double con, double lambda);

struct MetadataRecord {
    std::string image_id;
    std::string patient_id;
    std::set<std::string> labels;
};

struct SampleDraw {
    std::string positive;
    std::vector<std::string> negatives;

    friend bool operator==(const SampleDraw&, const SampleDraw&) = default;
};

/// Draws one positive (same patient, same disease, different image) and k
/// negatives without replacement (same disease, other patients). The draw is
/// a pure function of the table, arguments and seed.
///
/// Throws ParameterError when the query is missing, lacks the disease or
/// the table repeats an image id; NoPositiveSample; InsufficientNegatives.
SampleDraw sample_pairs(std::span<const MetadataRecord> table, const std::string& query_id, const std::string& disease,
                        int k, std::uint64_t seed);

}  // namespace crosseai
