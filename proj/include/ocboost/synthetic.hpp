#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ocboost/core.hpp"

namespace ocboost {

// Probability that each hypothesis produces a +1 margin.
struct ColumnProbs {
    std::vector<double> probs;
};

struct DriftSpec {
    std::size_t segments = 3;
    std::size_t rows_per_segment = 1000;
    std::size_t dims = 20;  // J
    double perturb_scale = 0.1;
    std::uint64_t seed = 1;
};

struct DriftStream {
    MarginMatrix margins;
    std::vector<std::size_t> boundaries;  // row index where each later segment starts
    std::vector<ColumnProbs> segment_probs;
};

ColumnProbs gen_probs(std::size_t dims, std::uint64_t seed);

// p' = clamp(p + scale * N(0,1), 0, 1) independently per column.
ColumnProbs drift_probs(const ColumnProbs& p, double perturb_scale, std::uint64_t seed);

/// Segment 1 uses gen_probs; each later segment drifts its predecessor.
/// All randomness derives from spec.seed through one sequential generator.
DriftStream gen_drift_stream(const DriftSpec& spec);

// JSON sidecar: seed, shape, perturbation model, per-segment probabilities, boundaries.
void write_stream_metadata(std::ostream& out, const DriftSpec& spec, const DriftStream& stream);

}  // namespace ocboost
