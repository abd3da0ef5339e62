#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "ocboost/batch.hpp"
#include "ocboost/errors.hpp"
#include "ocboost/eval.hpp"
#include "ocboost/random.hpp"
#include "ocboost/weak_learners.hpp"
#include "support.hpp"

using namespace ocboost;
using ocboost::testing::random_margins;
using ocboost::testing::rel_close;

namespace {

const MarginMatrix kHand{{1, 1}, {1, -1}, {-1, 1}};

}  // namespace

TEST_CASE("hand fixture") {
    const auto fit = fit_weights(kHand, 0.0);
    REQUIRE(fit.alphas.size() == 2);
    CHECK(std::abs(fit.alphas[0] - 0.5 * std::log(2.0)) < 1e-12);
    CHECK(std::abs(fit.alphas[1] - 0.5 * std::log(3.0)) < 1e-12);
    CHECK(fit.sums[0].plus == doctest::Approx(2.0));
    CHECK(fit.sums[0].minus == doctest::Approx(1.0));
    CHECK(fit.sums[1].plus == doctest::Approx(3.0 / std::sqrt(2.0)));
    CHECK(fit.sums[1].minus == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(exp_loss(kHand, fit.alphas, 1) - 2.0 * std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("degenerate columns") {
    CHECK(fit_weights(MarginMatrix{{1}, {-1}, {-1}, {1}}).alphas[0] == 0.0);
    CHECK_THROWS_AS(fit_weights(MarginMatrix{{1}}), UnboundedAlpha);
    CHECK_THROWS_AS(alpha_from_sums(0.0, 1.0, 0.0), UnboundedAlpha);
    CHECK(alpha_from_sums(1.0, 0.0, 0.5) == doctest::Approx(0.5 * std::log(3.0)));
    CHECK_THROWS_AS(fit_weights(kHand, -1.0), InvalidConfig);
}

TEST_CASE("all-zero alphas give loss N") {
    const auto m = random_margins(40, 5, 9);
    const std::vector<double> zero(5, 0.0);
    CHECK(exp_loss(m, zero, 5) == 40.0);
    CHECK_THROWS_AS(exp_loss(m, zero, 6), InvalidInput);
}

TEST_CASE("balance property after every coordinate") {
    Rng rng(77);
    int checked = 0;
    for (std::uint64_t s = 0; checked < 100; ++s) {
        const auto m = random_margins(2 + rng.below(49), 1 + rng.below(8), 1000 + s);
        if (!testing::mixed_columns(m, m.rows())) continue;
        ++checked;
        const auto fit = fit_weights(m, 0.0);
        std::vector<double> d(m.rows(), 1.0);
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const double a = fit.alphas[j];
            double plus = 0.0, minus = 0.0;
            for (std::size_t i = 0; i < m.rows(); ++i) {
                d[i] *= std::exp(-a * m(i, j));
                (m(i, j) > 0 ? plus : minus) += d[i];
            }
            const double target = std::sqrt(fit.sums[j].plus * fit.sums[j].minus);
            CHECK(rel_close(plus, target, 1e-12));
            CHECK(rel_close(minus, target, 1e-12));
        }
    }
}

TEST_CASE("loss equals final weights and falls with each coordinate") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const auto m = random_margins(60, 7, 200 + s);
        const auto fit = fit_weights(m, 0.01);
        const double total = std::accumulate(fit.final_weights.begin(), fit.final_weights.end(), 0.0);
        CHECK(rel_close(exp_loss(m, fit.alphas, m.cols()), total, 1e-12));
        double prev = exp_loss(m, fit.alphas, 0);
        for (std::size_t j = 1; j <= m.cols(); ++j) {
            const double cur = exp_loss(m, fit.alphas, j);
            CHECK(cur <= prev * (1 + 1e-12));
            prev = cur;
        }
    }
}

TEST_CASE("fit_weights agrees with a from-scratch stagewise fit") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto m = random_margins(80, 6, 300 + s);
        const auto fit = fit_weights(m, 0.01);
        const auto ref = testing::reference_alphas(m, m.rows(), 0.01);
        for (std::size_t j = 0; j < m.cols(); ++j) CHECK(rel_close(fit.alphas[j], ref[j], 1e-10));
    }
}

TEST_CASE("fit is invariant to example order") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto m = random_margins(50, 5, 400 + s);
        std::vector<std::size_t> perm(m.rows());
        std::iota(perm.begin(), perm.end(), 0);
        Rng rng(s);
        for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
        std::vector<Margin> cells;
        for (auto i : perm)
            for (auto v : m.row(i)) cells.push_back(v);
        const MarginMatrix shuffled(m.rows(), m.cols(), cells);
        const auto a = fit_weights(m, 0.01).alphas, b = fit_weights(shuffled, 0.01).alphas;
        for (std::size_t j = 0; j < a.size(); ++j) CHECK(rel_close(a[j], b[j], 1e-12));
    }
}

TEST_CASE("incremental oracle") {
    SUBCASE("two-example fixture") {
        const MarginMatrix m{{1}, {-1}};
        CHECK_THROWS_AS(incremental_oracle(m, 0.0), UnboundedAlpha);
        const double eps = 0.01;
        const auto t = incremental_oracle(m, eps);
        CHECK(t[0][0] == doctest::Approx(0.5 * std::log((1 + eps) / eps)));
        CHECK(t[1][0] == 0.0);
    }
    SUBCASE("entry n is the fit on prefix n") {
        const auto m = random_margins(120, 6, 17);
        const auto t = incremental_oracle(m, 0.01);
        REQUIRE(t.size() == m.rows());
        for (std::size_t n = 0; n < m.rows(); ++n) CHECK(t[n] == fit_weights(m.prefix(n + 1), 0.01).alphas);
        const auto tail = incremental_oracle(m, 0.01, 100);
        REQUIRE(tail.size() == 21);
        for (std::size_t n = 0; n < tail.size(); ++n) CHECK(tail[n] == t[99 + n]);
        CHECK_THROWS_AS(incremental_oracle(m, 0.01, 0), InvalidInput);
        CHECK_THROWS_AS(incremental_oracle(m, 0.01, 121), InvalidInput);
    }
    SUBCASE("greedy stagewise minimum at the last coordinate") {
        for (std::uint64_t s = 0; s < 10; ++s) {
            const auto m = random_margins(31, 4, 500 + s);
            if (!testing::mixed_columns(m, m.rows())) continue;
            const auto alphas = incremental_oracle(m, 0.0, m.rows())[0];
            auto loss_at = [&](double a) {
                auto trial = alphas;
                trial.back() = a;
                return exp_loss(m, trial, m.cols());
            };
            const double best = loss_at(alphas.back());
            for (int g = -2000; g <= 2000; ++g) CHECK(best <= loss_at(alphas.back() + g * 1e-3) * (1 + 1e-12));
        }
    }
}

TEST_CASE("oracle cost grows quadratically") {
    auto time_oracle = [](std::size_t n) {
        const auto m = random_margins(n, 5, 42);
        double best = 1e300;
        for (int rep = 0; rep < 15; ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            for (int k = 0; k < 40; ++k) {
                auto t = incremental_oracle(m, 0.01);
                CHECK(t.size() == n);
            }
            best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        }
        return best;
    };
    const double ratio = time_oracle(100) / time_oracle(50);
    MESSAGE("N=100 / N=50 oracle time ratio: " << ratio);
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 5.0);
}

TEST_CASE("trajectory csv round trip") {
    const auto t = incremental_oracle(random_margins(25, 3, 8), 0.01);
    std::stringstream ss;
    write_trajectory_csv(ss, t);
    CHECK(ss.str().rfind("n,alpha_1,alpha_2,alpha_3\n", 0) == 0);
    CHECK(read_trajectory_csv(ss) == t);
    std::istringstream bad("n,alpha_1\n1,abc\n");
    CHECK_THROWS_AS(read_trajectory_csv(bad), FormatError);
}

TEST_CASE("preselection") {
    SUBCASE("separable 1-D data needs one stump") {
        std::vector<LabeledExample> data;
        for (int i = 0; i < 20; ++i) data.emplace_back(std::vector<double>{static_cast<double>(i)}, i < 8 ? -1 : 1);
        PreselectOptions opts;
        opts.rounds = 1;
        opts.sample_size = 20;
        const auto c = preselect_hypotheses(data, stump_source(), opts);
        CHECK(test_error(c, data) == 0.0);
    }
    SUBCASE("seeded and deterministic") {
        std::vector<LabeledExample> data;
        Rng rng(5);
        for (int i = 0; i < 100; ++i)
            data.emplace_back(std::vector<double>{rng.gaussian(), rng.gaussian()}, rng.uniform() < 0.5 ? 1 : -1);
        PreselectOptions opts;
        opts.rounds = 6;
        opts.sample_size = 40;
        opts.seed = 11;
        const auto a = preselect_hypotheses(data, stump_source(), opts);
        const auto b = preselect_hypotheses(data, stump_source(), opts);
        std::stringstream sa, sb;
        save_classifier(sa, a);
        save_classifier(sb, b);
        CHECK(sa.str() == sb.str());
    }
    SUBCASE("boosting beats the best single stump on blobs") {
        std::vector<LabeledExample> data;
        Rng rng(23);
        for (int i = 0; i < 200; ++i) {
            const int y = i % 2 == 0 ? 1 : -1;
            data.emplace_back(std::vector<double>{rng.gaussian() + 0.8 * y, rng.gaussian() + 0.8 * y}, y);
        }
        const std::vector<double> unit(data.size(), 1.0);
        const double single = best_stump(data, unit).error;
        PreselectOptions opts;
        opts.rounds = 10;
        opts.sample_size = 100;
        opts.seed = 3;
        const auto c = preselect_hypotheses(data, stump_source(), opts);
        CHECK(test_error(c, data) < single);
    }
    SUBCASE("empty candidate is a selection failure") {
        std::vector<LabeledExample> data{{{0.0}, 1}, {{1.0}, -1}};
        CandidateSource none = [](auto, auto) { return std::optional<Candidate>{}; };
        PreselectOptions opts;
        opts.sample_size = 2;
        CHECK_THROWS_AS(preselect_hypotheses(data, none, opts), SelectionFailure);
    }
}
