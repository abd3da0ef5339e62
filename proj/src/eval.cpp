#include "ocboost/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "ocboost/errors.hpp"

namespace ocboost {

double approx_error(std::span<const double> reference, std::span<const double> alphas) {
    if (reference.size() != alphas.size()) throw InvalidInput("approx_error: vectors differ in length");
    double ref_norm = 0.0, norm = 0.0;
    for (double v : reference) ref_norm += std::abs(v);
    for (double v : alphas) norm += std::abs(v);
    if (!(ref_norm > 0.0) || !(norm > 0.0))
        throw UndefinedMetric("approx_error: cannot L1-normalise a zero vector");
    double dist = 0.0;
    for (std::size_t j = 0; j < alphas.size(); ++j) dist += std::abs(reference[j] / ref_norm - alphas[j] / norm);
    return std::min(1.0, 0.5 * dist);
}

double test_error(const StrongClassifier& c, std::span<const LabeledExample> data) {
    if (data.empty()) throw InvalidInput("test_error: empty data");
    std::size_t wrong = 0;
    for (const auto& ex : data)
        if (score(c, ex.x()).label != ex.label()) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(data.size());
}

double auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw InvalidInput("auc: one label per score required");
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] < scores[b]; });

    // midranks (1-based) over tie groups
    double positive_rank_sum = 0.0;
    std::size_t positives = 0, negatives = 0;
    for (std::size_t pos = 0; pos < order.size();) {
        std::size_t end = pos;
        while (end < order.size() && scores[order[end]] == scores[order[pos]]) ++end;
        const double midrank = (static_cast<double>(pos + 1) + static_cast<double>(end)) / 2.0;
        for (std::size_t t = pos; t < end; ++t) {
            const int y = labels[order[t]];
            if (y == 1) {
                ++positives;
                positive_rank_sum += midrank;
            } else if (y == -1) {
                ++negatives;
            } else {
                throw InvalidInput("auc: labels must be -1 or +1");
            }
        }
        pos = end;
    }
    if (positives == 0 || negatives == 0) throw UndefinedMetric("auc: needs both positive and negative labels");
    const double p = static_cast<double>(positives), n = static_cast<double>(negatives);
    return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * n);
}

OvaEnsemble::OvaEnsemble(std::vector<StrongClassifier> classifiers) : classifiers_(std::move(classifiers)) {
    if (classifiers_.size() != 10) throw InvalidInput("one-vs-all ensemble needs exactly 10 classifiers");
}

int argmax_digit(std::span<const double, 10> scores) {
    int best = 0;
    for (int d = 1; d < 10; ++d)
        if (scores[static_cast<std::size_t>(d)] > scores[static_cast<std::size_t>(best)]) best = d;
    return best;
}

int ova_predict(const OvaEnsemble& e, std::span<const double> x) {
    std::array<double, 10> scores{};
    for (int d = 0; d < 10; ++d) scores[static_cast<std::size_t>(d)] = score(e[d], x).value;
    return argmax_digit(scores);
}

}  // namespace ocboost
