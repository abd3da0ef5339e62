#include "ocboost/batch.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "ocboost/errors.hpp"
#include "ocboost/parallel.hpp"
#include "ocboost/random.hpp"
#include "ocboost/text.hpp"

namespace ocboost {

void AlphaTrajectory::push(std::vector<double> alphas) {
    if (steps.empty() && dims == 0) dims = alphas.size();
    if (alphas.size() != dims) throw InvalidInput("trajectory step has the wrong dimension");
    steps.push_back(std::move(alphas));
}

double alpha_from_sums(double plus, double minus, double eps) {
    if (eps < 0.0) throw InvalidConfig("smoothing must be non-negative");
    const double num = plus + eps;
    const double den = minus + eps;
    if (num <= 0.0 || den <= 0.0)
        throw UnboundedAlpha("alpha is unbounded: one side of the weight split is empty and smoothing is 0");
    return 0.5 * std::log(num / den);
}

BatchFitResult fit_weights(const MarginMatrix& m, double eps, std::size_t rows) {
    if (rows == 0) rows = m.rows();
    if (rows > m.rows()) throw InvalidInput("fit_weights: prefix longer than the matrix");
    const std::size_t cols = m.cols();

    BatchFitResult r;
    r.alphas.resize(cols);
    r.sums.resize(cols);
    r.final_weights.assign(rows, 1.0);
    auto& d = r.final_weights;

    for (std::size_t j = 0; j < cols; ++j) {
        WeightSums s;
        for (std::size_t i = 0; i < rows; ++i) (m(i, j) > 0 ? s.plus : s.minus) += d[i];
        try {
            r.alphas[j] = alpha_from_sums(s.plus, s.minus, eps);
        } catch (const UnboundedAlpha&) {
            throw UnboundedAlpha("fit_weights: coordinate " + std::to_string(j + 1) + " over " +
                                 std::to_string(rows) + " examples has an empty side with smoothing 0");
        }
        r.sums[j] = s;
        for (std::size_t i = 0; i < rows; ++i) d[i] *= std::exp(-r.alphas[j] * m(i, j));
    }
    return r;
}

double exp_loss(const MarginMatrix& m, std::span<const double> alphas, std::size_t upto) {
    if (upto > m.cols() || upto > alphas.size()) throw InvalidInput("exp_loss: coordinate out of range");
    double loss = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < upto; ++j) acc += alphas[j] * m(i, j);
        loss += std::exp(-acc);
    }
    return loss;
}

AlphaTrajectory incremental_oracle(const MarginMatrix& m, double eps, std::size_t first) {
    if (first == 0 || first > m.rows()) throw InvalidInput("incremental_oracle: first prefix out of range");
    std::vector<std::vector<double>> steps(m.rows() - first + 1);
    parallel_for(steps.size(), [&](std::size_t t) {
        try {
            steps[t] = fit_weights(m, eps, first + t).alphas;
        } catch (const UnboundedAlpha& e) {
            throw UnboundedAlpha("incremental oracle, example " + std::to_string(first + t) + ": " + e.what());
        }
    });
    AlphaTrajectory t;
    t.dims = m.cols();
    t.steps = std::move(steps);
    return t;
}

void write_trajectory_csv(std::ostream& out, const AlphaTrajectory& t) {
    out << "n";
    for (std::size_t j = 0; j < t.dims; ++j) out << ",alpha_" << (j + 1);
    out << '\n';
    for (std::size_t n = 0; n < t.size(); ++n) {
        out << (n + 1);
        for (double a : t[n]) out << ',' << format_double(a);
        out << '\n';
    }
}

AlphaTrajectory read_trajectory_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("trajectory CSV: missing header");
    auto header = split(trim(line), ',');
    if (header.empty() || trim(header[0]) != "n") throw FormatError("trajectory CSV: first column must be n");
    for (std::size_t j = 1; j < header.size(); ++j)
        if (trim(header[j]) != "alpha_" + std::to_string(j))
            throw FormatError("trajectory CSV: column " + std::to_string(j + 1) + " must be alpha_" +
                              std::to_string(j));
    AlphaTrajectory t;
    t.dims = header.size() - 1;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto f = split(trim(line), ',');
        if (f.size() != header.size()) throw FormatError("trajectory CSV: ragged row " + std::to_string(t.size() + 1));
        if (parse_int(f[0], "n") != static_cast<long long>(t.size() + 1))
            throw FormatError("trajectory CSV: rows must be numbered consecutively from 1");
        std::vector<double> a;
        for (std::size_t j = 1; j < f.size(); ++j) a.push_back(parse_double(f[j], "alpha"));
        t.push(std::move(a));
    }
    return t;
}

namespace {

std::vector<std::size_t> weighted_sample(std::span<const double> weights, std::size_t count, Rng& rng) {
    std::vector<double> cumulative(weights.size());
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) cumulative[i] = total += weights[i];
    std::vector<std::size_t> picks(count);
    for (auto& p : picks) {
        const double u = rng.uniform() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        p = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), weights.size() - 1);
    }
    return picks;
}

}  // namespace

StrongClassifier preselect_hypotheses(std::span<const LabeledExample> data, const CandidateSource& source,
                                      const PreselectOptions& options) {
    if (data.empty()) throw InvalidInput("preselect: empty data");
    if (options.rounds == 0) throw InvalidConfig("preselect: rounds must be at least 1");
    if (options.sample_size == 0 || options.sample_size > data.size())
        throw InvalidConfig("preselect: sample size must be in [1, N]");

    Rng rng(options.seed);
    std::vector<double> d(data.size(), 1.0);
    std::vector<HypothesisPtr> hyps;
    std::vector<double> alphas;
    std::vector<LabeledExample> sample;
    sample.reserve(options.sample_size);
    const std::vector<double> unit(options.sample_size, 1.0);

    for (std::size_t round = 0; round < options.rounds; ++round) {
        sample.clear();
        for (auto i : weighted_sample(d, options.sample_size, rng)) sample.push_back(data[i]);

        auto found = source(sample, unit);
        if (!found || !found->hypothesis)
            throw SelectionFailure("preselect: weak learner returned no hypothesis in round " +
                                   std::to_string(round + 1));

        std::vector<Margin> margins(data.size());
        WeightSums s;
        for (std::size_t i = 0; i < data.size(); ++i) {
            margins[i] = compute_margin(*found->hypothesis, data[i]);
            (margins[i] > 0 ? s.plus : s.minus) += d[i];
        }
        const double alpha = alpha_from_sums(s.plus, s.minus, options.eps);
        for (std::size_t i = 0; i < data.size(); ++i) d[i] *= std::exp(-alpha * margins[i]);
        hyps.push_back(found->hypothesis);
        alphas.push_back(alpha);
    }
    return {std::move(hyps), std::move(alphas)};
}

}  // namespace ocboost
