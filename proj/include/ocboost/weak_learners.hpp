#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "ocboost/batch.hpp"
#include "ocboost/core.hpp"

namespace ocboost {

// polarity * sign(x[feature] - threshold), sign(0) = +1
class DecisionStump final : public WeakHypothesis {
public:
    DecisionStump(std::size_t feature, double threshold, int polarity);

    int classify(std::span<const double> x) const override;

    std::size_t feature() const { return feature_; }
    double threshold() const { return threshold_; }
    int polarity() const { return polarity_; }

private:
    std::size_t feature_;
    double threshold_;
    int polarity_;
};

// sign(||prototype - x||_2 - theta), sign(0) = +1: positive outside the radius.
class PrototypeHypothesis final : public WeakHypothesis {
public:
    PrototypeHypothesis(std::vector<double> prototype, double theta);

    int classify(std::span<const double> x) const override;

    const std::vector<double>& prototype() const { return prototype_; }
    double theta() const { return theta_; }

private:
    std::vector<double> prototype_;
    double theta_;
};

double euclidean_distance(std::span<const double> a, std::span<const double> b);

struct StumpFit {
    DecisionStump stump;
    double error;  // weighted error / total weight
};

struct PrototypeFit {
    PrototypeHypothesis hypothesis;
    double error;
};

/// Exhaustive stump search over every feature, thresholds at -inf, +inf and
/// midpoints of consecutive distinct values, both polarities. Ties go to the
/// lowest feature, then the lowest threshold, then polarity +1.
StumpFit best_stump(std::span<const LabeledExample> data, std::span<const double> weights);

/// Searches every candidate prototype with thresholds at -inf, +inf and
/// midpoints of consecutive distinct distances. Ties go to the earlier
/// candidate, then the smaller threshold.
PrototypeFit best_prototype(std::span<const LabeledExample> data, std::span<const double> weights,
                            std::span<const std::vector<double>> candidates);

CandidateSource stump_source();
// Uses every sampled example as a prototype candidate.
CandidateSource prototype_source();

// Zero mean, unit population variance per image; constant images become all zeros.
void normalize_image(std::span<double> image);
std::vector<std::vector<double>> normalize_images(std::vector<std::vector<double>> images);

// Text format: "ocb-classifier 1", "J <n>", then one line per hypothesis:
//   stump <alpha> <feature> <threshold> <polarity>
//   prototype <alpha> <theta> <dim> <v_1> ... <v_dim>
void save_classifier(std::ostream& out, const StrongClassifier& c);
StrongClassifier load_classifier(std::istream& in);

}  // namespace ocboost
