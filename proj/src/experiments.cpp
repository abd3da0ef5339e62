#include "ocboost/experiments.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "ocboost/batch.hpp"
#include "ocboost/errors.hpp"
#include "ocboost/eval.hpp"
#include "ocboost/parallel.hpp"
#include "ocboost/text.hpp"
#include "ocboost/weak_learners.hpp"

namespace ocboost {

std::string LearnerKey::label() const {
    if (learner == "ocb") return "ocb:K=" + std::to_string(order) + ":" + convention;
    if (learner == "oza") return "oza:" + convention;
    return learner;
}

const LearnerSummary& SyntheticResult::find(const LearnerKey& key) const {
    for (const auto& s : summary)
        if (s.key == key) return s;
    throw InvalidInput("no results for learner " + key.label());
}

const MnistLearnerSummary& MnistResult::find(const LearnerKey& key) const {
    for (const auto& s : summary)
        if (s.key == key) return s;
    throw InvalidInput("no results for learner " + key.label());
}

namespace {

struct LearnerRun {
    LearnerKey key;
    AlphaTrajectory trajectory;  // entry t follows example warm + t + 1
};

struct LearnerSet {
    std::vector<std::size_t> orders;
    std::vector<NegativeSumConvention> conventions;
    std::vector<OzaMode> oza_modes;
};

std::vector<LearnerKey> learner_keys(const LearnerSet& set) {
    std::vector<LearnerKey> keys;
    for (auto c : set.conventions)
        for (auto k : set.orders) keys.push_back({"ocb", k, std::string(to_string(c))});
    for (auto m : set.oza_modes) keys.push_back({"oza", 0, std::string(to_string(m))});
    return keys;
}

std::vector<LearnerRun> run_learners(const MarginMatrix& m, std::size_t warm, double eps, const LearnerSet& set) {
    if (warm >= m.rows()) throw InvalidConfig("warm start must leave at least one example to stream");
    const std::optional<MarginMatrix> prefix = warm ? std::optional(m.prefix(warm)) : std::nullopt;
    const MarginMatrix stream = warm ? m.slice(warm, m.rows()) : m;

    std::vector<LearnerRun> runs;
    for (auto c : set.conventions)
        for (auto k : set.orders) {
            OcbConfig cfg;
            cfg.order = k;
            cfg.eps = eps;
            cfg.convention = c;
            auto state = prefix ? init_warm(*prefix, cfg) : init_cold(m.cols(), cfg);
            runs.push_back({{"ocb", k, std::string(to_string(c))}, run_stream(state, stream)});
        }
    for (auto mode : set.oza_modes) {
        auto state = prefix ? oza_init_warm(*prefix, eps, mode) : oza_init_cold(m.cols(), eps, mode);
        runs.push_back({{"oza", 0, std::string(to_string(mode))}, oza_run_stream(state, stream)});
    }
    return runs;
}

double mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

SyntheticResult run_synthetic(const SyntheticConfig& cfg) {
    if (cfg.seeds.empty()) throw InvalidConfig("synthetic experiment needs at least one seed");
    const LearnerSet set{cfg.orders, cfg.conventions, cfg.oza_modes};
    const auto keys = learner_keys(set);
    if (keys.empty()) throw InvalidConfig("synthetic experiment needs at least one learner");

    struct SeedOutput {
        DriftStream stream;
        std::vector<std::vector<double>> errors;  // [learner][t]
    };
    std::vector<std::optional<SeedOutput>> outputs(cfg.seeds.size());

    parallel_for(cfg.seeds.size(), [&](std::size_t s) {
        auto spec = cfg.drift;
        spec.seed = cfg.seeds[s];
        auto stream = gen_drift_stream(spec);
        try {
            if (cfg.warm_start >= stream.margins.rows())
                throw InvalidConfig("warm start must leave at least one example to stream");
            const auto oracle = incremental_oracle(stream.margins, cfg.eps, cfg.warm_start + 1);
            const auto runs = run_learners(stream.margins, cfg.warm_start, cfg.eps, set);
            SeedOutput out{std::move(stream), {}};
            for (const auto& run : runs) {
                std::vector<double> errs(run.trajectory.size());
                for (std::size_t t = 0; t < errs.size(); ++t)
                    errs[t] = approx_error(oracle[t], run.trajectory[t]);
                out.errors.push_back(std::move(errs));
            }
            outputs[s] = std::move(out);
        } catch (const NumericError& e) {
            throw NumericError("synthetic run, seed " + std::to_string(spec.seed) + ": " + e.what());
        }
    });

    SyntheticResult result;
    for (std::size_t l = 0; l < keys.size(); ++l) result.summary.push_back({keys[l], {}, 0.0});
    for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
        auto& out = *outputs[s];
        for (std::size_t l = 0; l < keys.size(); ++l) {
            const auto& errs = out.errors[l];
            for (std::size_t t = 0; t < errs.size(); ++t)
                result.rows.push_back({cfg.warm_start + t + 1, keys[l], cfg.seeds[s], errs[t]});
            result.summary[l].per_seed_mean.push_back(mean(errs));
        }
        result.streams.push_back(std::move(out.stream));
    }
    for (auto& s : result.summary) s.mean = mean(s.per_seed_mean);
    return result;
}

void write_synthetic_csv(std::ostream& out, const SyntheticResult& r) {
    out << "example_index,learner,K,convention,seed,approx_error\n";
    for (const auto& row : r.rows)
        out << row.example_index << ',' << row.key.learner << ',' << row.key.order << ',' << row.key.convention << ','
            << row.seed << ',' << format_double(row.approx_error) << '\n';
}

void write_summary_json(std::ostream& out, const std::vector<LearnerSummary>& summary) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : summary) {
        nlohmann::ordered_json j;
        j["learner"] = s.key.learner;
        j["K"] = s.key.order;
        j["convention"] = s.key.convention;
        j["mean_approx_error"] = s.mean;
        j["per_seed_mean"] = s.per_seed_mean;
        arr.push_back(std::move(j));
    }
    out << arr.dump(2) << '\n';
}

void write_oracle_compare_csv(std::ostream& out, const SyntheticConfig& cfg, const SyntheticResult& r) {
    out << "seed,K,convention,mean_approx_error\n";
    for (const auto& s : r.summary) {
        if (s.key.learner != "ocb") continue;
        for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
            out << cfg.seeds[i] << ',' << s.key.order << ',' << s.key.convention << ','
                << format_double(s.per_seed_mean[i]) << '\n';
    }
    for (const auto& s : r.summary)
        if (s.key.learner == "ocb")
            out << "all," << s.key.order << ',' << s.key.convention << ',' << format_double(s.mean) << '\n';
}

namespace {

// Hypothesis outputs h_j(x) for every example, row-major N x J.
std::vector<Margin> hypothesis_outputs(const StrongClassifier& c, const std::vector<std::vector<double>>& images) {
    std::vector<Margin> out(images.size() * c.size());
    for (std::size_t i = 0; i < images.size(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j)
            out[i * c.size() + j] = static_cast<Margin>(c.hypotheses()[j]->classify(images[i]));
    return out;
}

struct DigitOutcome {
    // [learner][checkpoint]
    std::vector<std::vector<double>> test_error;
    std::vector<std::vector<double>> approx_error;
    // [learner][checkpoint][test example]
    std::vector<std::vector<std::vector<double>>> test_scores;
};

std::vector<std::size_t> checkpoints(const MnistConfig& cfg) {
    std::vector<std::size_t> out;
    for (std::size_t n = cfg.period; n < cfg.train_size; n += cfg.period)
        if (n > cfg.warm_start) out.push_back(n);
    out.push_back(cfg.train_size);
    return out;
}

}  // namespace

MnistResult run_mnist(const MnistConfig& cfg, const DigitSet& train, const DigitSet& test) {
    if (cfg.train_size > train.images.size() || cfg.test_size > test.images.size())
        throw InvalidConfig("MNIST experiment asks for more examples than were loaded");
    if (cfg.test_size == 0 || cfg.period == 0 || cfg.dims == 0) throw InvalidConfig("MNIST sizes must be positive");
    if (cfg.warm_start == 0 || cfg.warm_start >= cfg.train_size)
        throw InvalidConfig("MNIST warm start must be in [1, train_size)");
    if (cfg.preselect_size > cfg.train_size || cfg.preselect_sample > cfg.preselect_size)
        throw InvalidConfig("MNIST preselection sizes must satisfy sample <= preselect_size <= train_size");

    const LearnerSet set{cfg.orders, {cfg.convention}, cfg.oza_modes};
    std::vector<LearnerKey> keys{{"batch", 0, ""}};
    for (auto& k : learner_keys(set)) keys.push_back(k);
    const auto marks = checkpoints(cfg);

    DigitSet train_part{{train.images.begin(), train.images.begin() + static_cast<std::ptrdiff_t>(cfg.train_size)},
                        {train.digits.begin(), train.digits.begin() + static_cast<std::ptrdiff_t>(cfg.train_size)}};
    DigitSet test_part{{test.images.begin(), test.images.begin() + static_cast<std::ptrdiff_t>(cfg.test_size)},
                       {test.digits.begin(), test.digits.begin() + static_cast<std::ptrdiff_t>(cfg.test_size)}};

    std::vector<DigitOutcome> outcomes(10);
    parallel_for(10, [&](std::size_t digit) {
        const auto examples = one_vs_all(train_part, static_cast<int>(digit));
        PreselectOptions opts;
        opts.rounds = cfg.dims;
        opts.sample_size = cfg.preselect_sample;
        opts.seed = cfg.seed * 1000003u + digit;
        opts.eps = cfg.eps;
        const auto classifier = preselect_hypotheses(
            std::span(examples).first(cfg.preselect_size), prototype_source(), opts);

        auto outputs = hypothesis_outputs(classifier, train_part.images);
        for (std::size_t i = 0; i < examples.size(); ++i)
            for (std::size_t j = 0; j < cfg.dims; ++j) outputs[i * cfg.dims + j] *= static_cast<Margin>(examples[i].label());
        const MarginMatrix margins(examples.size(), cfg.dims, std::move(outputs));
        const auto test_out = hypothesis_outputs(classifier, test_part.images);

        const auto runs = run_learners(margins, cfg.warm_start, cfg.eps, set);

        DigitOutcome o;
        o.test_error.assign(keys.size(), {});
        o.approx_error.assign(keys.size(), {});
        o.test_scores.assign(keys.size(), {});
        for (auto n : marks) {
            const auto batch = fit_weights(margins, cfg.eps, n).alphas;
            for (std::size_t l = 0; l < keys.size(); ++l) {
                const auto& alphas = l == 0 ? batch : runs[l - 1].trajectory[n - cfg.warm_start - 1];
                std::vector<double> scores(cfg.test_size);
                std::size_t wrong = 0;
                for (std::size_t t = 0; t < cfg.test_size; ++t) {
                    scores[t] = score_outputs(alphas, std::span(test_out).subspan(t * cfg.dims, cfg.dims));
                    const int truth = test_part.digits[t] == static_cast<int>(digit) ? 1 : -1;
                    if (sign_of(scores[t]) != truth) ++wrong;
                }
                o.test_error[l].push_back(static_cast<double>(wrong) / static_cast<double>(cfg.test_size));
                o.approx_error[l].push_back(l == 0 ? 0.0 : approx_error(batch, alphas));
                o.test_scores[l].push_back(std::move(scores));
            }
        }
        outcomes[digit] = std::move(o);
    });

    MnistResult result;
    for (std::size_t c = 0; c < marks.size(); ++c)
        for (std::size_t l = 0; l < keys.size(); ++l) {
            std::size_t wrong = 0;
            for (std::size_t t = 0; t < cfg.test_size; ++t) {
                std::array<double, 10> s{};
                for (std::size_t d = 0; d < 10; ++d) s[d] = outcomes[d].test_scores[l][c][t];
                if (argmax_digit(s) != test_part.digits[t]) ++wrong;
            }
            const double ova = static_cast<double>(wrong) / static_cast<double>(cfg.test_size);
            for (int d = 0; d < 10; ++d) {
                const auto& o = outcomes[static_cast<std::size_t>(d)];
                result.rows.push_back({marks[c], keys[l], d, o.test_error[l][c], o.approx_error[l][c], ova});
            }
        }

    const std::size_t last = marks.size() - 1;
    for (std::size_t l = 0; l < keys.size(); ++l) {
        MnistLearnerSummary s{keys[l], 0.0, {}, 0.0};
        std::vector<double> approx;
        for (const auto& o : outcomes) {
            approx.push_back(o.approx_error[l][last]);
            s.digit_test_error.push_back(o.test_error[l][last]);
        }
        s.mean_approx_error = mean(approx);
        for (const auto& row : result.rows)
            if (row.examples_seen == marks[last] && row.key == keys[l]) s.ova_error = row.ova_error;
        result.summary.push_back(std::move(s));
    }
    return result;
}

void write_mnist_csv(std::ostream& out, const MnistResult& r) {
    out << "examples_seen,learner,digit,test_error,approx_error,ova_error\n";
    for (const auto& row : r.rows)
        out << row.examples_seen << ',' << row.key.label() << ',' << row.digit << ',' << format_double(row.test_error)
            << ',' << format_double(row.approx_error) << ',' << format_double(row.ova_error) << '\n';
}

void write_mnist_summary_json(std::ostream& out, const MnistConfig& cfg, const MnistResult& r) {
    nlohmann::ordered_json j;
    j["config"] = {{"train_size", cfg.train_size},   {"test_size", cfg.test_size},
                   {"J", cfg.dims},                   {"preselect_size", cfg.preselect_size},
                   {"preselect_sample", cfg.preselect_sample}, {"warm_start", cfg.warm_start},
                   {"period", cfg.period},           {"seed", cfg.seed},
                   {"eps", cfg.eps},                 {"orders", cfg.orders},
                   {"convention", std::string(to_string(cfg.convention))},
                   {"note", "desk-scale sizes; not a replication of the full 60K-example protocol"}};
    auto arr = nlohmann::ordered_json::array();
    for (const auto& s : r.summary)
        arr.push_back({{"learner", s.key.label()},
                       {"mean_approx_error", s.mean_approx_error},
                       {"ova_error", s.ova_error},
                       {"digit_test_error", s.digit_test_error}});
    j["final"] = std::move(arr);
    out << j.dump(2) << '\n';
}

}  // namespace ocboost
