#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ocboost/core.hpp"
#include "ocboost/random.hpp"

namespace ocboost::testing {

// Random +/-1 matrix; column j is +1 with probability in [lo, hi].
inline MarginMatrix random_margins(std::size_t rows, std::size_t cols, std::uint64_t seed, double lo = 0.2,
                                   double hi = 0.8) {
    Rng rng(seed);
    std::vector<double> p(cols);
    for (auto& v : p) v = lo + (hi - lo) * rng.uniform();
    std::vector<Margin> cells(rows * cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) cells[i * cols + j] = rng.uniform() < p[j] ? 1 : -1;
    return MarginMatrix(rows, cols, std::move(cells));
}

// Columns that contain both signs in the first `rows` rows, so an unsmoothed fit stays bounded.
inline bool mixed_columns(const MarginMatrix& m, std::size_t rows) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
        bool pos = false, neg = false;
        for (std::size_t i = 0; i < rows; ++i) (m(i, j) > 0 ? pos : neg) = true;
        if (!pos || !neg) return false;
    }
    return true;
}

inline bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Stagewise AdaBoost written directly from the loss: the weight of example i
// entering coordinate j is exp(-sum_{k<j} alpha_k m_ik), recomputed from scratch.
inline std::vector<double> reference_alphas(const MarginMatrix& m, std::size_t rows, double eps) {
    std::vector<double> alphas;
    for (std::size_t j = 0; j < m.cols(); ++j) {
        double plus = 0.0, minus = 0.0;
        for (std::size_t i = 0; i < rows; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < j; ++k) s += alphas[k] * m(i, k);
            (m(i, j) > 0 ? plus : minus) += std::exp(-s);
        }
        alphas.push_back(0.5 * std::log((plus + eps) / (minus + eps)));
    }
    return alphas;
}

}  // namespace ocboost::testing
