#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "ocboost/batch.hpp"
#include "ocboost/core.hpp"

namespace ocboost {

/// How the q estimate for the negative-margin correction pi_j^- is formed.
///  as_written:         q = W_jk^- / W_jj^-, the negative-margin fraction, as in the published pseudocode.
///  theorem_consistent: q = 1 - W_jk^- / W_jj^-, the positive-margin fraction that minimises the
///                      weighted squared approximation error.
enum class NegativeSumConvention { as_written, theorem_consistent };

std::string_view to_string(NegativeSumConvention c);
NegativeSumConvention parse_convention(std::string_view s);

struct OcbConfig {
    std::size_t order = std::numeric_limits<std::size_t>::max();  // K; clamped to J
    double eps = 0.01;
    NegativeSumConvention convention = NegativeSumConvention::theorem_consistent;  // as_written drifts further from batch as K grows
    double overflow_limit = 1e100;
    // Divide both W rows of coordinate j by their larger diagonal once it passes
    // sqrt(overflow_limit). Keeps alpha_j and every q ratio of the row, but no
    // longer matches the unnormalised update.
    bool rescale_rows = false;

    bool operator==(const OcbConfig&) const = default;
};

/// Lower-triangular (n x n) store, cell (j, k) with k <= j.
class TriangularMatrix {
public:
    TriangularMatrix() = default;
    TriangularMatrix(std::size_t n, double fill) : n_(n), cells_(n * (n + 1) / 2, fill) {}

    std::size_t dim() const { return n_; }
    double& operator()(std::size_t j, std::size_t k) { return cells_[j * (j + 1) / 2 + k]; }
    double operator()(std::size_t j, std::size_t k) const { return cells_[j * (j + 1) / 2 + k]; }
    std::span<double> row(std::size_t j) { return {cells_.data() + j * (j + 1) / 2, j + 1}; }
    std::span<const double> row(std::size_t j) const { return {cells_.data() + j * (j + 1) / 2, j + 1}; }
    const std::vector<double>& cells() const { return cells_; }

    bool operator==(const TriangularMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> cells_;
};

/// Complete memory of the online learner. Coordinates are 1-based; index 0
/// is a sentinel whose delta alpha is always 0, so the first coordinate's
/// correction product is exactly 1.
struct OcbState {
    OcbConfig config;
    std::size_t dims = 0;         // J
    TriangularMatrix wplus;       // (J+1) x (J+1)
    TriangularMatrix wminus;
    std::vector<double> alphas;        // length J, alphas[j-1] = alpha_j
    std::vector<double> delta_alphas;  // length J+1, [0] == 0
    std::size_t examples_seen = 0;

    std::size_t order() const;  // K after clamping
    bool operator==(const OcbState&) const = default;
};

// Option 1: all alphas 0, every W cell = eps. Requires eps > 0.
OcbState init_cold(std::size_t dims, const OcbConfig& config);

// Option 2: batch AdaBoost on `prefix`, cells = eps + pairwise weight sums.
OcbState init_warm(const MarginMatrix& prefix, const OcbConfig& config);

enum class MarginSign { positive, negative };

/// Correction product for coordinate j (1-based) over the last `order`
/// predecessors, using the current delta alphas.
double pi_product(const OcbState& state, std::size_t j, MarginSign sign, std::size_t order);

/// Folds one example (its row of margins) into the state; returns the alphas after the update.
const std::vector<double>& process_example(OcbState& state, std::span<const Margin> margins);

AlphaTrajectory run_stream(OcbState& state, const MarginMatrix& m);

/// Weighted squared approximation error of a single correction term:
///   sum over {i : margins_last_i == sign} of d_i (1[m_ij=-1] q^2 delta^2 + 1[m_ij=+1] (1-q)^2 delta^2)
/// with delta = exp(-delta_alpha) - exp(delta_alpha).
double brute_force_q_error(std::span<const double> weights, std::span<const Margin> margins_j,
                           std::span<const Margin> margins_last, MarginSign sign, double delta_alpha, double q);

// Closed-form minimiser of brute_force_q_error: weighted fraction of positive margins at j within the subset.
double optimal_q(std::span<const double> weights, std::span<const Margin> margins_j,
                 std::span<const Margin> margins_last, MarginSign sign);

// Versioned text checkpoint; values round-trip exactly.
void save_state(std::ostream& out, const OcbState& state);
OcbState load_state(std::istream& in);

}  // namespace ocboost
