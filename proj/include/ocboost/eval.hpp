#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ocboost/core.hpp"

namespace ocboost {

// Half the L1 distance between the two L1-normalised vectors; in [0, 1].
double approx_error(std::span<const double> reference, std::span<const double> alphas);

// Fraction of examples whose predicted label differs from the true label.
double test_error(const StrongClassifier& c, std::span<const LabeledExample> data);

// P(random positive outscores random negative), ties count one half.
double auc(std::span<const double> scores, std::span<const int> labels);

/// One binary classifier per digit, +1 meaning "is this digit".
class OvaEnsemble {
public:
    explicit OvaEnsemble(std::vector<StrongClassifier> classifiers);

    const StrongClassifier& operator[](int digit) const { return classifiers_[static_cast<std::size_t>(digit)]; }
    const std::vector<StrongClassifier>& classifiers() const { return classifiers_; }

private:
    std::vector<StrongClassifier> classifiers_;
};

// Digit whose classifier gives the largest raw vote; ties go to the lowest digit.
int ova_predict(const OvaEnsemble& e, std::span<const double> x);
int argmax_digit(std::span<const double, 10> scores);

}  // namespace ocboost
