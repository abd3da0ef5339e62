#include "ocboost/ocb.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "ocboost/errors.hpp"
#include "ocboost/text.hpp"

namespace ocboost {

std::string_view to_string(NegativeSumConvention c) {
    return c == NegativeSumConvention::as_written ? "as_written" : "theorem_consistent";
}

NegativeSumConvention parse_convention(std::string_view s) {
    if (s == "as_written") return NegativeSumConvention::as_written;
    if (s == "theorem_consistent") return NegativeSumConvention::theorem_consistent;
    throw InvalidConfig("unknown negative-sum convention '" + std::string(s) +
                        "' (expected as_written or theorem_consistent)");
}

std::size_t OcbState::order() const { return std::min(config.order, dims); }

namespace {

void check_config(const OcbConfig& c) {
    if (!(c.eps >= 0.0) || !std::isfinite(c.eps)) throw InvalidConfig("smoothing must be finite and >= 0");
    if (!(c.overflow_limit > 0.0)) throw InvalidConfig("overflow limit must be positive");
}

OcbState blank_state(std::size_t dims, const OcbConfig& config) {
    if (dims == 0) throw InvalidInput("need at least one weak hypothesis");
    check_config(config);
    OcbState s;
    s.config = config;
    s.dims = dims;
    s.wplus = TriangularMatrix(dims + 1, config.eps);
    s.wminus = TriangularMatrix(dims + 1, config.eps);
    s.alphas.assign(dims, 0.0);
    s.delta_alphas.assign(dims + 1, 0.0);
    return s;
}

}  // namespace

OcbState init_cold(std::size_t dims, const OcbConfig& config) {
    if (!(config.eps > 0.0))
        throw InvalidConfig("cold start needs smoothing > 0: the first alpha would be log(0/0)");
    return blank_state(dims, config);
}

OcbState init_warm(const MarginMatrix& prefix, const OcbConfig& config) {
    auto s = blank_state(prefix.cols(), config);
    const auto fit = fit_weights(prefix, config.eps);
    const std::size_t n = prefix.rows();
    const std::size_t dims = prefix.cols();

    // Replays the batch reweighting so d holds the weight entering each coordinate.
    std::vector<double> d(n, 1.0);
    TriangularMatrix plus(dims + 1, 0.0), minus(dims + 1, 0.0);
    for (std::size_t j = 1; j <= dims; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const Margin mj = prefix(i, j - 1);
            auto& w = mj > 0 ? plus : minus;
            for (std::size_t k = 1; k <= j; ++k)
                if (prefix(i, k - 1) == mj) w(j, k) += d[i];
        }
        for (std::size_t i = 0; i < n; ++i) d[i] *= std::exp(-fit.alphas[j - 1] * prefix(i, j - 1));
    }
    for (std::size_t j = 1; j <= dims; ++j)
        for (std::size_t k = 1; k <= j; ++k) {
            s.wplus(j, k) = plus(j, k) + config.eps;
            s.wminus(j, k) = minus(j, k) + config.eps;
        }
    s.alphas = fit.alphas;
    s.examples_seen = n;
    return s;
}

namespace {

// e^{da} and e^{-da} for each coordinate's latest delta alpha
struct Exponentials {
    std::vector<double> up;
    std::vector<double> down;
};

// q e^{-da} + (1-q) e^{da}, arranged so that da == 0 yields exactly 1
double correction_factor(double q, double up, double down) { return up + q * (down - up); }

double pi_with(const OcbState& state, std::size_t j, MarginSign sign, std::size_t order, const Exponentials& ex) {
    order = std::min(order, state.dims);
    const std::size_t first = j > order ? j - order : 0;
    if (first == j) return 1.0;

    const auto& w = sign == MarginSign::positive ? state.wplus : state.wminus;
    const double diag = w(j, j);
    if (!(diag > 0.0))
        throw DivisionByZero("pi_product: W_" + std::to_string(j) + std::to_string(j) +
                             (sign == MarginSign::positive ? "^+" : "^-") + " is zero");
    const bool complement = sign == MarginSign::negative &&
                            state.config.convention == NegativeSumConvention::theorem_consistent;
    double pi = 1.0;
    for (std::size_t k = first; k < j; ++k) {
        double q = w(j, k) / diag;
        if (complement) q = 1.0 - q;
        pi *= correction_factor(q, ex.up[k], ex.down[k]);
    }
    return pi;
}

}  // namespace

double pi_product(const OcbState& state, std::size_t j, MarginSign sign, std::size_t order) {
    if (j == 0 || j > state.dims) throw InvalidInput("pi_product: coordinate out of range");
    Exponentials ex{std::vector<double>(j), std::vector<double>(j)};
    for (std::size_t k = 0; k < j; ++k) {
        ex.up[k] = std::exp(state.delta_alphas[k]);
        ex.down[k] = std::exp(-state.delta_alphas[k]);
    }
    return pi_with(state, j, sign, order, ex);
}

const std::vector<double>& process_example(OcbState& state, std::span<const Margin> margins) {
    if (margins.size() != state.dims)
        throw InvalidInput("process_example: row has " + std::to_string(margins.size()) + " margins, expected " +
                           std::to_string(state.dims));
    const std::size_t order = state.order();
    const double limit = state.config.overflow_limit;
    double d = 1.0;
    // slot 0 is the sentinel; slot k is filled once coordinate k has been updated in this pass
    Exponentials ex{std::vector<double>(state.dims + 1, 1.0), std::vector<double>(state.dims + 1, 1.0)};

    for (std::size_t j = 1; j <= state.dims; ++j) {
        const double pi_plus = pi_with(state, j, MarginSign::positive, order, ex);
        const double pi_minus = pi_with(state, j, MarginSign::negative, order, ex);
        const Margin mj = margins[j - 1];
        auto plus = state.wplus.row(j);
        auto minus = state.wminus.row(j);
        for (std::size_t k = 1; k <= j; ++k) {
            const Margin mk = margins[k - 1];
            plus[k] = plus[k] * pi_plus + (mk > 0 && mj > 0 ? d : 0.0);
            minus[k] = minus[k] * pi_minus + (mk < 0 && mj < 0 ? d : 0.0);
        }

        if (state.config.rescale_rows) {
            const double scale = std::max(plus[j], minus[j]);
            if (scale > std::sqrt(limit))
                for (std::size_t k = 0; k <= j; ++k) {
                    plus[k] /= scale;
                    minus[k] /= scale;
                }
        }
        for (std::size_t k = 1; k <= j; ++k)
            if (!(plus[k] <= limit) || !(minus[k] <= limit))
                throw NumericOverflow("weight sums at coordinate " + std::to_string(j) + " exceed " +
                                      format_double(limit));
        if (!(plus[j] > 0.0) || !(minus[j] > 0.0))
            throw DivisionByZero("coordinate " + std::to_string(j) + " has an empty weight sum");

        const double alpha = 0.5 * std::log(plus[j] / minus[j]);
        state.delta_alphas[j] = alpha - state.alphas[j - 1];
        state.alphas[j - 1] = alpha;
        ex.up[j] = std::exp(state.delta_alphas[j]);
        ex.down[j] = std::exp(-state.delta_alphas[j]);
        d *= std::exp(-alpha * mj);
        if (!(d <= limit))
            throw NumericOverflow("example weight after coordinate " + std::to_string(j) + " exceeds " +
                                  format_double(limit));
    }
    ++state.examples_seen;
    return state.alphas;
}

namespace {

template <class E>
[[noreturn]] void rethrow_at(const E& e, std::size_t index) {
    throw E("example " + std::to_string(index) + ": " + e.what());
}

}  // namespace

AlphaTrajectory run_stream(OcbState& state, const MarginMatrix& m) {
    AlphaTrajectory t;
    t.dims = state.dims;
    t.steps.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        try {
            t.push(process_example(state, m.row(i)));
        } catch (const NumericOverflow& e) {
            rethrow_at(e, i + 1);
        } catch (const DivisionByZero& e) {
            rethrow_at(e, i + 1);
        }
    }
    return t;
}

double brute_force_q_error(std::span<const double> weights, std::span<const Margin> margins_j,
                           std::span<const Margin> margins_last, MarginSign sign, double delta_alpha, double q) {
    if (weights.size() != margins_j.size() || weights.size() != margins_last.size())
        throw InvalidInput("brute_force_q_error: vectors differ in length");
    const Margin s = sign == MarginSign::positive ? 1 : -1;
    const double delta = std::exp(-delta_alpha) - std::exp(delta_alpha);
    const double d2 = delta * delta;
    double err = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (margins_last[i] != s) continue;
        err += weights[i] * (margins_j[i] < 0 ? q * q * d2 : (1.0 - q) * (1.0 - q) * d2);
    }
    return err;
}

double optimal_q(std::span<const double> weights, std::span<const Margin> margins_j,
                 std::span<const Margin> margins_last, MarginSign sign) {
    if (weights.size() != margins_j.size() || weights.size() != margins_last.size())
        throw InvalidInput("optimal_q: vectors differ in length");
    const Margin s = sign == MarginSign::positive ? 1 : -1;
    double positive = 0.0, total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (margins_last[i] != s) continue;
        total += weights[i];
        if (margins_j[i] > 0) positive += weights[i];
    }
    if (!(total > 0.0)) throw DivisionByZero("optimal_q: subset carries no weight");
    return positive / total;
}

namespace {

constexpr std::string_view kMagic = "ocb-state";
constexpr int kVersion = 1;

void write_triangle(std::ostream& out, const TriangularMatrix& t) {
    for (std::size_t j = 0; j < t.dim(); ++j) {
        auto r = t.row(j);
        for (std::size_t k = 0; k < r.size(); ++k) out << (k ? " " : "") << format_double(r[k]);
        out << '\n';
    }
}

std::string expect_line(std::istream& in, std::string_view what) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("checkpoint: truncated before " + std::string(what));
    return line;
}

std::string_view expect_key(std::string_view line, std::string_view key) {
    line = trim(line);
    if (line.substr(0, key.size()) != key || line.size() <= key.size() || line[key.size()] != ' ')
        throw FormatError("checkpoint: expected '" + std::string(key) + " <value>', got '" + std::string(line) + "'");
    return trim(line.substr(key.size() + 1));
}

std::vector<double> read_values(std::istream& in, std::size_t count, std::string_view what) {
    auto line = expect_line(in, what);
    std::vector<double> v;
    for (auto f : split(trim(line), ' ')) {
        if (trim(f).empty()) continue;
        v.push_back(parse_double(f, what));
    }
    if (v.size() != count)
        throw FormatError("checkpoint: " + std::string(what) + " has " + std::to_string(v.size()) +
                          " values, expected " + std::to_string(count));
    return v;
}

void read_triangle(std::istream& in, TriangularMatrix& t, std::string_view name) {
    if (trim(expect_line(in, name)) != name) throw FormatError("checkpoint: missing section " + std::string(name));
    for (std::size_t j = 0; j < t.dim(); ++j) {
        auto v = read_values(in, j + 1, std::string(name) + " row " + std::to_string(j));
        std::copy(v.begin(), v.end(), t.row(j).begin());
    }
}

}  // namespace

void save_state(std::ostream& out, const OcbState& s) {
    out << kMagic << ' ' << kVersion << '\n';
    out << "J " << s.dims << '\n';
    out << "K " << s.order() << '\n';
    out << "eps " << format_double(s.config.eps) << '\n';
    out << "convention " << to_string(s.config.convention) << '\n';
    out << "examples_seen " << s.examples_seen << '\n';
    out << "overflow_limit " << format_double(s.config.overflow_limit) << '\n';
    out << "rescale_rows " << (s.config.rescale_rows ? 1 : 0) << '\n';
    out << "wplus\n";
    write_triangle(out, s.wplus);
    out << "wminus\n";
    write_triangle(out, s.wminus);
    out << "alphas\n";
    for (std::size_t j = 0; j < s.alphas.size(); ++j) out << (j ? " " : "") << format_double(s.alphas[j]);
    out << '\n';
}

OcbState load_state(std::istream& in) {
    auto head = split(trim(expect_line(in, "header")), ' ');
    if (head.size() != 2 || head[0] != kMagic) throw FormatError("checkpoint: not an ocb-state file");
    if (parse_int(head[1], "version") != kVersion)
        throw FormatError("checkpoint: unsupported version " + std::string(head[1]));

    OcbConfig c;
    const auto dims = parse_int(expect_key(expect_line(in, "J"), "J"), "J");
    if (dims < 1) throw FormatError("checkpoint: J must be positive");
    c.order = static_cast<std::size_t>(parse_int(expect_key(expect_line(in, "K"), "K"), "K"));
    c.eps = parse_double(expect_key(expect_line(in, "eps"), "eps"), "eps");
    c.convention = parse_convention(expect_key(expect_line(in, "convention"), "convention"));
    const auto seen = parse_int(expect_key(expect_line(in, "examples_seen"), "examples_seen"), "examples_seen");
    c.overflow_limit = parse_double(expect_key(expect_line(in, "overflow_limit"), "overflow_limit"), "overflow_limit");
    c.rescale_rows = parse_int(expect_key(expect_line(in, "rescale_rows"), "rescale_rows"), "rescale_rows") != 0;

    auto s = blank_state(static_cast<std::size_t>(dims), c);
    s.examples_seen = static_cast<std::size_t>(seen);
    read_triangle(in, s.wplus, "wplus");
    read_triangle(in, s.wminus, "wminus");
    if (trim(expect_line(in, "alphas")) != "alphas") throw FormatError("checkpoint: missing section alphas");
    s.alphas = read_values(in, s.dims, "alphas");
    return s;
}

}  // namespace ocboost
