#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ocboost/mnist.hpp"
#include "ocboost/ocb.hpp"
#include "ocboost/oza.hpp"
#include "ocboost/synthetic.hpp"

namespace ocboost {

/// Identifies one learner configuration in experiment output.
/// learner is "ocb", "oza" or "batch"; convention holds the OCB negative-sum
/// convention or the Oza mode; order is 0 for non-OCB learners.
struct LearnerKey {
    std::string learner;
    std::size_t order = 0;
    std::string convention;

    std::string label() const;
    bool operator==(const LearnerKey&) const = default;
};

struct SyntheticConfig {
    DriftSpec drift;  // drift.seed is replaced by each entry of `seeds`
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::size_t warm_start = 500;  // 0 = cold start
    double eps = 0.01;             // online smoothing, also used by the reference refits
    std::vector<std::size_t> orders{0, 5, 20};
    std::vector<NegativeSumConvention> conventions{NegativeSumConvention::theorem_consistent};
    std::vector<OzaMode> oza_modes{OzaMode::averaged};
};

struct SyntheticRow {
    std::size_t example_index;  // 1-based position in the stream
    LearnerKey key;
    std::uint64_t seed;
    double approx_error;
};

struct LearnerSummary {
    LearnerKey key;
    std::vector<double> per_seed_mean;  // same order as the configured seeds
    double mean = 0.0;                  // mean of per_seed_mean
};

struct SyntheticResult {
    std::vector<SyntheticRow> rows;
    std::vector<LearnerSummary> summary;
    std::vector<DriftStream> streams;  // one per seed

    const LearnerSummary& find(const LearnerKey& key) const;
};

/// Per seed: draws a drift stream, computes the exact incremental oracle,
/// runs every configured learner (warm-started on the first `warm_start`
/// rows) and records the approximation error after each streamed example.
SyntheticResult run_synthetic(const SyntheticConfig& cfg);

// Header: example_index,learner,K,convention,seed,approx_error
void write_synthetic_csv(std::ostream& out, const SyntheticResult& r);
void write_summary_json(std::ostream& out, const std::vector<LearnerSummary>& summary);

// Header: seed,K,convention,mean_approx_error followed by one "all" row per (K, convention).
void write_oracle_compare_csv(std::ostream& out, const SyntheticConfig& cfg, const SyntheticResult& r);

struct MnistConfig {
    std::size_t train_size = 10000;
    std::size_t test_size = 10000;
    std::size_t dims = 50;             // hypotheses per digit
    std::size_t preselect_size = 2000;  // training prefix searched for hypotheses
    std::size_t preselect_sample = 300;
    std::size_t warm_start = 500;
    std::size_t period = 1000;
    std::uint64_t seed = 1;
    double eps = 0.01;
    std::vector<std::size_t> orders{50};
    NegativeSumConvention convention = NegativeSumConvention::theorem_consistent;
    std::vector<OzaMode> oza_modes{OzaMode::averaged};
};

struct MnistRow {
    std::size_t examples_seen;
    LearnerKey key;
    int digit;
    double test_error;
    double approx_error;
    double ova_error;
};

struct MnistLearnerSummary {
    LearnerKey key;
    double mean_approx_error = 0.0;        // over digits, at the final checkpoint
    std::vector<double> digit_test_error;  // final checkpoint
    double ova_error = 0.0;                // final checkpoint
};

struct MnistResult {
    std::vector<MnistRow> rows;
    std::vector<MnistLearnerSummary> summary;

    const MnistLearnerSummary& find(const LearnerKey& key) const;
};

MnistResult run_mnist(const MnistConfig& cfg, const DigitSet& train, const DigitSet& test);

// Header: examples_seen,learner,digit,test_error,approx_error,ova_error
void write_mnist_csv(std::ostream& out, const MnistResult& r);
void write_mnist_summary_json(std::ostream& out, const MnistConfig& cfg, const MnistResult& r);

}  // namespace ocboost
