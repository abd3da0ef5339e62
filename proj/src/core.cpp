#include "ocboost/core.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "ocboost/errors.hpp"
#include "ocboost/text.hpp"

namespace ocboost {

LabeledExample::LabeledExample(std::vector<double> features, int label)
    : features_(std::move(features)), label_(label) {
    if (label_ != 1 && label_ != -1)
        throw InvalidInput("label must be -1 or +1, got " + std::to_string(label_));
    for (double v : features_)
        if (!std::isfinite(v)) throw InvalidInput("feature values must be finite");
}

LabeledExample LabeledExample::flipped() const { return {features_, -label_}; }

MarginMatrix::MarginMatrix(std::size_t rows, std::size_t cols, std::vector<Margin> cells)
    : rows_(rows), cols_(cols), cells_(std::move(cells)) {
    if (rows_ == 0 || cols_ == 0) throw InvalidInput("margin matrix needs at least one row and column");
    if (cells_.size() != rows_ * cols_) throw InvalidInput("margin matrix cell count does not match shape");
    for (Margin m : cells_)
        if (m != 1 && m != -1) throw InvalidInput("margin entries must be -1 or +1");
}

namespace {

using Literal = std::initializer_list<std::initializer_list<int>>;

std::size_t literal_cols(Literal rows) { return rows.size() ? rows.begin()->size() : 0; }

std::vector<Margin> flatten(Literal rows) {
    std::vector<Margin> cells;
    for (const auto& r : rows) {
        if (r.size() != literal_cols(rows)) throw InvalidInput("ragged margin matrix literal");
        for (int v : r) cells.push_back(static_cast<Margin>(v));
    }
    return cells;
}

}  // namespace

MarginMatrix::MarginMatrix(std::initializer_list<std::initializer_list<int>> rows)
    : MarginMatrix(rows.size(), literal_cols(rows), flatten(rows)) {}

MarginMatrix MarginMatrix::prefix(std::size_t n) const { return slice(0, n); }

MarginMatrix MarginMatrix::slice(std::size_t begin, std::size_t end) const {
    if (begin >= end || end > rows_) throw InvalidInput("margin matrix slice out of range");
    std::vector<Margin> cells(cells_.begin() + static_cast<std::ptrdiff_t>(begin * cols_),
                              cells_.begin() + static_cast<std::ptrdiff_t>(end * cols_));
    return {end - begin, cols_, std::move(cells)};
}

StrongClassifier::StrongClassifier(std::vector<HypothesisPtr> hypotheses, std::vector<double> alphas)
    : hypotheses_(std::move(hypotheses)), alphas_(std::move(alphas)) {
    if (hypotheses_.size() != alphas_.size())
        throw InvalidInput("classifier needs one alpha per hypothesis");
    for (const auto& h : hypotheses_)
        if (!h) throw InvalidInput("null weak hypothesis");
    for (double a : alphas_)
        if (!std::isfinite(a)) throw InvalidInput("classifier alphas must be finite");
}

StrongClassifier StrongClassifier::with_alphas(std::vector<double> alphas) const {
    return {hypotheses_, std::move(alphas)};
}

namespace {

Margin checked_output(const WeakHypothesis& h, std::span<const double> x) {
    int out = h.classify(x);
    if (out != 1 && out != -1)
        throw InvalidInput("weak hypothesis returned " + std::to_string(out) + "; only -1/+1 are allowed");
    return static_cast<Margin>(out);
}

}  // namespace

Margin compute_margin(const WeakHypothesis& h, const LabeledExample& ex) {
    return static_cast<Margin>(ex.label() * checked_output(h, ex.x()));
}

MarginMatrix build_margin_matrix(std::span<const HypothesisPtr> hypotheses,
                                 std::span<const LabeledExample> data) {
    if (hypotheses.empty()) throw InvalidInput("empty hypothesis list");
    if (data.empty()) throw InvalidInput("empty data");
    std::vector<Margin> cells;
    cells.reserve(hypotheses.size() * data.size());
    for (const auto& ex : data)
        for (const auto& h : hypotheses) cells.push_back(compute_margin(*h, ex));
    return {data.size(), hypotheses.size(), std::move(cells)};
}

double score_outputs(std::span<const double> alphas, std::span<const Margin> outputs) {
    double s = 0.0;
    for (std::size_t j = 0; j < alphas.size(); ++j) s += alphas[j] * outputs[j];
    return s;
}

Score score(const StrongClassifier& c, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) s += c.alphas()[j] * checked_output(*c.hypotheses()[j], x);
    return {s, sign_of(s)};
}

void write_margin_csv(std::ostream& out, const MarginMatrix& m) {
    for (std::size_t j = 0; j < m.cols(); ++j) out << (j ? "," : "") << "m_" << (j + 1);
    out << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto r = m.row(i);
        for (std::size_t j = 0; j < r.size(); ++j) out << (j ? "," : "") << int(r[j]);
        out << '\n';
    }
}

MarginMatrix read_margin_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("margin CSV: missing header");
    auto header = split(trim(line), ',');
    for (std::size_t j = 0; j < header.size(); ++j)
        if (trim(header[j]) != "m_" + std::to_string(j + 1))
            throw FormatError("margin CSV: header column " + std::to_string(j + 1) + " must be m_" +
                              std::to_string(j + 1));
    const std::size_t cols = header.size();
    std::vector<Margin> cells;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        auto fields = split(trim(line), ',');
        if (fields.size() != cols)
            throw FormatError("margin CSV: row " + std::to_string(rows + 1) + " has " +
                              std::to_string(fields.size()) + " fields, expected " + std::to_string(cols));
        for (auto f : fields) {
            auto v = parse_int(f, "margin");
            if (v != 1 && v != -1)
                throw FormatError("margin CSV: row " + std::to_string(rows + 1) + " holds " + std::to_string(v));
            cells.push_back(static_cast<Margin>(v));
        }
        ++rows;
    }
    if (rows == 0) throw FormatError("margin CSV: no data rows");
    return {rows, cols, std::move(cells)};
}

}  // namespace ocboost
