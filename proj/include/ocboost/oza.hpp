#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "ocboost/batch.hpp"
#include "ocboost/core.hpp"

namespace ocboost {

// averaged: the two-case Oza-Russell reweighting (mean of old weight and AdaBoost's reweighted value).
// exponential: plain AdaBoost reweighting d * exp(-alpha m).
enum class OzaMode { averaged, exponential };

std::string_view to_string(OzaMode m);
OzaMode parse_oza_mode(std::string_view s);

/// Oza-Russell online boosting over fixed, ordered hypotheses.
struct OzaState {
    OzaMode mode = OzaMode::averaged;
    double eps = 0.01;
    std::vector<double> wplus;
    std::vector<double> wminus;
    std::vector<double> alphas;
    std::size_t examples_seen = 0;

    std::size_t dims() const { return alphas.size(); }
};

// Sums seeded with eps, alphas 0.
OzaState oza_init_cold(std::size_t dims, double eps, OzaMode mode);

// Sums = eps + batch AdaBoost per-coordinate sums on the prefix; alphas = batch alphas.
OzaState oza_init_warm(const MarginMatrix& prefix, double eps, OzaMode mode);

const std::vector<double>& oza_process_example(OzaState& state, std::span<const Margin> margins);

AlphaTrajectory oza_run_stream(OzaState& state, const MarginMatrix& m);

// (d + d exp(-2 alpha m)) / 2
double consolidated_reweight(double d, double alpha, int margin);

// The two-case form: d (W+ + W-) / (2 W+) on a correct vote, d (W+ + W-) / (2 W-) otherwise.
double two_case_reweight(double d, double wplus, double wminus, int margin);

}  // namespace ocboost
