#include "ocboost/weak_learners.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "ocboost/errors.hpp"
#include "ocboost/parallel.hpp"
#include "ocboost/text.hpp"

namespace ocboost {

DecisionStump::DecisionStump(std::size_t feature, double threshold, int polarity)
    : feature_(feature), threshold_(threshold), polarity_(polarity) {
    if (polarity != 1 && polarity != -1) throw InvalidInput("stump polarity must be -1 or +1");
    if (std::isnan(threshold)) throw InvalidInput("stump threshold is NaN");
}

int DecisionStump::classify(std::span<const double> x) const {
    if (feature_ >= x.size()) throw InvalidInput("stump feature index beyond input dimension");
    return polarity_ * sign_of(x[feature_] - threshold_);
}

PrototypeHypothesis::PrototypeHypothesis(std::vector<double> prototype, double theta)
    : prototype_(std::move(prototype)), theta_(theta) {
    if (prototype_.empty()) throw InvalidInput("empty prototype");
    if (std::isnan(theta)) throw InvalidInput("prototype threshold is NaN");
}

int PrototypeHypothesis::classify(std::span<const double> x) const {
    return sign_of(euclidean_distance(prototype_, x) - theta_);
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidInput("distance between vectors of different length");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return std::sqrt(s);
}

namespace {

double midpoint(double a, double b) { return a + (b - a) / 2.0; }

struct Split {
    double threshold;
    double error;  // un-normalised, for "+1 at or above threshold"
};

/// Scans thresholds over `values` for the rule "predict +1 iff value >= threshold".
/// Returns the errors in ascending threshold order, starting at -inf and ending at +inf.
std::vector<Split> scan_thresholds(std::span<const double> values, std::span<const LabeledExample> data,
                                   std::span<const double> weights) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });

    double err = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i)
        if (data[i].label() < 0) err += weights[i];

    std::vector<Split> out;
    out.reserve(values.size() + 1);
    out.push_back({-HUGE_VAL, err});
    std::size_t pos = 0;
    while (pos < order.size()) {
        const double v = values[order[pos]];
        // every example with this value flips to -1 once the threshold passes it
        while (pos < order.size() && values[order[pos]] == v) {
            const auto i = order[pos++];
            err += data[i].label() > 0 ? weights[i] : -weights[i];
        }
        const double t = pos < order.size() ? midpoint(v, values[order[pos]]) : HUGE_VAL;
        out.push_back({t, err});
    }
    return out;
}

void check_weights(std::span<const LabeledExample> data, std::span<const double> weights, double& total) {
    if (data.empty()) throw InvalidInput("weak learner: empty data");
    if (weights.size() != data.size()) throw InvalidInput("weak learner: one weight per example required");
    total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("weak learner: weights must be finite and >= 0");
        total += w;
    }
    if (!(total > 0.0)) throw InvalidInput("weak learner: weights sum to zero");
}

}  // namespace

StumpFit best_stump(std::span<const LabeledExample> data, std::span<const double> weights) {
    double total = 0.0;
    check_weights(data, weights, total);
    const std::size_t dims = data.front().features().size();
    if (dims == 0) throw InvalidInput("best_stump: examples have no features");
    for (const auto& ex : data)
        if (ex.features().size() != dims) throw InvalidInput("best_stump: ragged feature vectors");

    struct Best {
        std::size_t feature = 0;
        double threshold = -HUGE_VAL;
        int polarity = 1;
        double error = HUGE_VAL;
    } best;
    auto consider = [&best](std::size_t f, double t, int p, double e) {
        if (e < best.error) best = {f, t, p, e};
    };
    std::vector<double> column(data.size());
    for (std::size_t f = 0; f < dims; ++f) {
        for (std::size_t i = 0; i < data.size(); ++i) column[i] = data[i].features()[f];
        for (const auto& s : scan_thresholds(column, data, weights)) {
            consider(f, s.threshold, 1, s.error);
            consider(f, s.threshold, -1, total - s.error);
        }
    }
    return {DecisionStump(best.feature, best.threshold, best.polarity), std::max(0.0, best.error) / total};
}

PrototypeFit best_prototype(std::span<const LabeledExample> data, std::span<const double> weights,
                            std::span<const std::vector<double>> candidates) {
    double total = 0.0;
    check_weights(data, weights, total);
    if (candidates.empty()) throw InvalidInput("best_prototype: no candidates");

    std::vector<Split> per_candidate(candidates.size());
    parallel_for(candidates.size(), [&](std::size_t c) {
        std::vector<double> dist(data.size());
        for (std::size_t i = 0; i < data.size(); ++i) dist[i] = euclidean_distance(candidates[c], data[i].x());
        Split best{-HUGE_VAL, HUGE_VAL};
        for (const auto& s : scan_thresholds(dist, data, weights))
            if (s.error < best.error) best = s;
        per_candidate[c] = best;
    });

    std::size_t winner = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c)
        if (per_candidate[c].error < per_candidate[winner].error) winner = c;
    return {PrototypeHypothesis(candidates[winner], per_candidate[winner].threshold),
            std::max(0.0, per_candidate[winner].error) / total};
}

CandidateSource stump_source() {
    return [](std::span<const LabeledExample> data, std::span<const double> w) -> std::optional<Candidate> {
        auto fit = best_stump(data, w);
        return Candidate{std::make_shared<DecisionStump>(fit.stump), fit.error};
    };
}

CandidateSource prototype_source() {
    return [](std::span<const LabeledExample> data, std::span<const double> w) -> std::optional<Candidate> {
        std::vector<std::vector<double>> candidates;
        candidates.reserve(data.size());
        for (const auto& ex : data) candidates.push_back(ex.features());
        auto fit = best_prototype(data, w, candidates);
        return Candidate{std::make_shared<PrototypeHypothesis>(fit.hypothesis), fit.error};
    };
}

void normalize_image(std::span<double> image) {
    if (image.empty()) return;
    if (std::all_of(image.begin(), image.end(), [&](double v) { return v == image.front(); })) {
        std::fill(image.begin(), image.end(), 0.0);
        return;
    }
    const double n = static_cast<double>(image.size());
    const double mean = std::accumulate(image.begin(), image.end(), 0.0) / n;
    double var = 0.0;
    for (double v : image) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / n);
    for (double& v : image) v = (v - mean) / sd;
}

std::vector<std::vector<double>> normalize_images(std::vector<std::vector<double>> images) {
    for (auto& img : images) normalize_image(img);
    return images;
}

void save_classifier(std::ostream& out, const StrongClassifier& c) {
    out << "ocb-classifier 1\n";
    out << "J " << c.size() << '\n';
    for (std::size_t j = 0; j < c.size(); ++j) {
        const auto* h = c.hypotheses()[j].get();
        const auto alpha = format_double(c.alphas()[j]);
        if (auto* s = dynamic_cast<const DecisionStump*>(h)) {
            out << "stump " << alpha << ' ' << s->feature() << ' ' << format_double(s->threshold()) << ' '
                << s->polarity() << '\n';
        } else if (auto* p = dynamic_cast<const PrototypeHypothesis*>(h)) {
            out << "prototype " << alpha << ' ' << format_double(p->theta()) << ' ' << p->prototype().size();
            for (double v : p->prototype()) out << ' ' << format_double(v);
            out << '\n';
        } else {
            throw InvalidInput("save_classifier: hypothesis " + std::to_string(j + 1) + " has no file format");
        }
    }
}

StrongClassifier load_classifier(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "ocb-classifier 1")
        throw FormatError("classifier file: missing 'ocb-classifier 1' header");
    if (!std::getline(in, line)) throw FormatError("classifier file: missing J line");
    auto head = split(trim(line), ' ');
    if (head.size() != 2 || head[0] != "J") throw FormatError("classifier file: expected 'J <count>'");
    const auto count = parse_int(head[1], "J");
    std::vector<HypothesisPtr> hyps;
    std::vector<double> alphas;
    for (long long j = 0; j < count; ++j) {
        if (!std::getline(in, line)) throw FormatError("classifier file: truncated at hypothesis " + std::to_string(j + 1));
        auto f = split(trim(line), ' ');
        if (f[0] == "stump" && f.size() == 5) {
            alphas.push_back(parse_double(f[1], "alpha"));
            hyps.push_back(std::make_shared<DecisionStump>(static_cast<std::size_t>(parse_int(f[2], "feature")),
                                                           parse_double(f[3], "threshold"),
                                                           static_cast<int>(parse_int(f[4], "polarity"))));
        } else if (f.size() >= 4 && f[0] == "prototype") {
            alphas.push_back(parse_double(f[1], "alpha"));
            const double theta = parse_double(f[2], "theta");
            const auto dim = static_cast<std::size_t>(parse_int(f[3], "dimension"));
            if (f.size() != 4 + dim) throw FormatError("classifier file: prototype dimension mismatch");
            std::vector<double> v;
            v.reserve(dim);
            for (std::size_t k = 0; k < dim; ++k) v.push_back(parse_double(f[4 + k], "prototype value"));
            hyps.push_back(std::make_shared<PrototypeHypothesis>(std::move(v), theta));
        } else {
            throw FormatError("classifier file: unrecognised line " + std::to_string(j + 3));
        }
    }
    return {std::move(hyps), std::move(alphas)};
}

}  // namespace ocboost
