#include "ocboost/oza.hpp"

#include <cmath>
#include <string>

#include "ocboost/errors.hpp"

namespace ocboost {

std::string_view to_string(OzaMode m) { return m == OzaMode::averaged ? "averaged" : "exponential"; }

OzaMode parse_oza_mode(std::string_view s) {
    if (s == "averaged") return OzaMode::averaged;
    if (s == "exponential") return OzaMode::exponential;
    throw InvalidConfig("unknown Oza mode '" + std::string(s) + "' (expected averaged or exponential)");
}

OzaState oza_init_cold(std::size_t dims, double eps, OzaMode mode) {
    if (dims == 0) throw InvalidInput("need at least one weak hypothesis");
    if (!(eps > 0.0)) throw InvalidConfig("Oza cold start needs smoothing > 0");
    OzaState s;
    s.mode = mode;
    s.eps = eps;
    s.wplus.assign(dims, eps);
    s.wminus.assign(dims, eps);
    s.alphas.assign(dims, 0.0);
    return s;
}

OzaState oza_init_warm(const MarginMatrix& prefix, double eps, OzaMode mode) {
    if (!(eps >= 0.0)) throw InvalidConfig("smoothing must be >= 0");
    const auto fit = fit_weights(prefix, eps);
    OzaState s;
    s.mode = mode;
    s.eps = eps;
    for (const auto& w : fit.sums) {
        s.wplus.push_back(w.plus + eps);
        s.wminus.push_back(w.minus + eps);
    }
    s.alphas = fit.alphas;
    s.examples_seen = prefix.rows();
    return s;
}

double consolidated_reweight(double d, double alpha, int margin) {
    return (d + d * std::exp(-2.0 * alpha * margin)) / 2.0;
}

double two_case_reweight(double d, double wplus, double wminus, int margin) {
    const double divisor = margin > 0 ? wplus : wminus;
    if (!(divisor > 0.0)) throw DivisionByZero("Oza reweight: empty weight sum in divisor");
    return d * (wplus + wminus) / (2.0 * divisor);
}

const std::vector<double>& oza_process_example(OzaState& s, std::span<const Margin> margins) {
    if (margins.size() != s.dims())
        throw InvalidInput("oza_process_example: row has " + std::to_string(margins.size()) +
                           " margins, expected " + std::to_string(s.dims()));
    double d = 1.0;
    for (std::size_t j = 0; j < s.dims(); ++j) {
        const Margin m = margins[j];
        (m > 0 ? s.wplus[j] : s.wminus[j]) += d;
        if (!(s.wplus[j] > 0.0) || !(s.wminus[j] > 0.0))
            throw DivisionByZero("Oza: coordinate " + std::to_string(j + 1) + " has an empty weight sum");
        const double alpha = 0.5 * std::log(s.wplus[j] / s.wminus[j]);
        s.alphas[j] = alpha;
        if (s.mode == OzaMode::exponential)
            d *= std::exp(-alpha * m);
        else
            d = two_case_reweight(d, s.wplus[j], s.wminus[j], m);
    }
    ++s.examples_seen;
    return s.alphas;
}

AlphaTrajectory oza_run_stream(OzaState& state, const MarginMatrix& m) {
    AlphaTrajectory t;
    t.dims = state.dims();
    t.steps.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        try {
            t.push(oza_process_example(state, m.row(i)));
        } catch (const DivisionByZero& e) {
            throw DivisionByZero("example " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return t;
}

}  // namespace ocboost
