#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "ocboost/core.hpp"

namespace ocboost {

struct WeightSums {
    double plus = 0.0;   // W_j^+: weight on examples with margin +1 at coordinate j
    double minus = 0.0;  // W_j^-
};

struct BatchFitResult {
    std::vector<double> alphas;
    std::vector<double> final_weights;  // d_{i,J+1}
    std::vector<WeightSums> sums;       // per coordinate, over the weights entering that coordinate
};

/// Sequence of alpha vectors; entry n holds the alphas after examples 1..n+1.
struct AlphaTrajectory {
    std::size_t dims = 0;
    std::vector<std::vector<double>> steps;

    std::size_t size() const { return steps.size(); }
    const std::vector<double>& operator[](std::size_t n) const { return steps[n]; }
    void push(std::vector<double> alphas);

    bool operator==(const AlphaTrajectory&) const = default;
};

// alpha = 0.5 * log((plus + eps) / (minus + eps)); throws UnboundedAlpha when a side is empty and eps == 0.
double alpha_from_sums(double plus, double minus, double eps);

/// Weights-only AdaBoost over the fixed column order of `m`, restricted to its
/// first `rows` rows (all rows when 0). Example weights start at 1 and are
/// never normalised; W sums accumulate in ascending example order.
BatchFitResult fit_weights(const MarginMatrix& m, double eps = 0.0, std::size_t rows = 0);

// sum_i exp(-sum_{j < upto} alpha_j m_ij)
double exp_loss(const MarginMatrix& m, std::span<const double> alphas, std::size_t upto);

/// Exact ground truth for the online learners: entry t is fit_weights on the
/// first `first` + t rows, for every prefix up to the whole matrix. O(N^2 J).
/// Starting past short prefixes avoids their unbounded alphas when eps == 0.
AlphaTrajectory incremental_oracle(const MarginMatrix& m, double eps = 0.0, std::size_t first = 1);

// Trajectory CSV: header `n,alpha_1..alpha_J`, n counted from 1.
void write_trajectory_csv(std::ostream& out, const AlphaTrajectory& t);
AlphaTrajectory read_trajectory_csv(std::istream& in);

struct Candidate {
    HypothesisPtr hypothesis;
    double error = 0.0;
};

/// Weak-learner search: given a sample and per-example weights, return the
/// hypothesis with the smallest weighted error, or nothing.
using CandidateSource =
    std::function<std::optional<Candidate>(std::span<const LabeledExample>, std::span<const double>)>;

struct PreselectOptions {
    std::size_t rounds = 10;
    std::size_t sample_size = 100;
    std::uint64_t seed = 1;
    double eps = 0.01;  // smoothing in the alpha log-ratio
};

/// AdaBoost with resampling: each round draws `sample_size` examples with
/// replacement proportional to the current weights, asks `source` for the
/// best hypothesis on that sample, then sets alpha from the full weighted set.
StrongClassifier preselect_hypotheses(std::span<const LabeledExample> data, const CandidateSource& source,
                                      const PreselectOptions& options);

}  // namespace ocboost
