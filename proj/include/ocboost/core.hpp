#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ocboost {

// A margin m_ij = y_i * h_j(x_i); always -1 or +1.
using Margin = std::int8_t;

// sign() with sign(0) mapped to +1, shared by every hypothesis and the score tie rule.
inline int sign_of(double v) { return v < 0.0 ? -1 : 1; }

class LabeledExample {
public:
    LabeledExample(std::vector<double> features, int label);

    const std::vector<double>& features() const { return features_; }
    std::span<const double> x() const { return features_; }
    int label() const { return label_; }

    // Copy with the label negated.
    LabeledExample flipped() const;

private:
    std::vector<double> features_;
    int label_;
};

/// A fixed binary classifier. Implementations are immutable and must return
/// exactly -1 or +1; build_margin_matrix rejects anything else.
class WeakHypothesis {
public:
    virtual ~WeakHypothesis() = default;
    virtual int classify(std::span<const double> x) const = 0;
};

using HypothesisPtr = std::shared_ptr<const WeakHypothesis>;

/// Dense N x J matrix of margins, row-major (one row per example).
class MarginMatrix {
public:
    MarginMatrix(std::size_t rows, std::size_t cols, std::vector<Margin> cells);
    MarginMatrix(std::initializer_list<std::initializer_list<int>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Margin operator()(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }
    std::span<const Margin> row(std::size_t i) const {
        return {cells_.data() + i * cols_, cols_};
    }
    const std::vector<Margin>& cells() const { return cells_; }

    MarginMatrix prefix(std::size_t n) const;
    MarginMatrix slice(std::size_t begin, std::size_t end) const;

    bool operator==(const MarginMatrix&) const = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Margin> cells_;
};

class StrongClassifier {
public:
    StrongClassifier(std::vector<HypothesisPtr> hypotheses, std::vector<double> alphas);

    std::size_t size() const { return hypotheses_.size(); }
    const std::vector<HypothesisPtr>& hypotheses() const { return hypotheses_; }
    const std::vector<double>& alphas() const { return alphas_; }

    StrongClassifier with_alphas(std::vector<double> alphas) const;

private:
    std::vector<HypothesisPtr> hypotheses_;
    std::vector<double> alphas_;
};

struct Score {
    double value;
    int label;
};

Margin compute_margin(const WeakHypothesis& h, const LabeledExample& ex);

MarginMatrix build_margin_matrix(std::span<const HypothesisPtr> hypotheses,
                                 std::span<const LabeledExample> data);

// Weighted vote sum_j alpha_j h_j(x); ties (exactly 0) predict +1.
Score score(const StrongClassifier& c, std::span<const double> x);

// Weighted vote from a precomputed row of hypothesis outputs.
double score_outputs(std::span<const double> alphas, std::span<const Margin> outputs);

// CSV with header m_1..m_J and one row of 1/-1 entries per example.
void write_margin_csv(std::ostream& out, const MarginMatrix& m);
MarginMatrix read_margin_csv(std::istream& in);

}  // namespace ocboost
