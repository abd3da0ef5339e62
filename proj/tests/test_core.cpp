#include <cmath>
#include <limits>
#include <sstream>

#include "doctest.h"
#include "ocboost/core.hpp"
#include "ocboost/errors.hpp"
#include "ocboost/weak_learners.hpp"
#include "support.hpp"

using namespace ocboost;

namespace {

struct Constant final : WeakHypothesis {
    int out;
    explicit Constant(int o) : out(o) {}
    int classify(std::span<const double>) const override { return out; }
};

}  // namespace

TEST_CASE("labeled example validation") {
    CHECK_NOTHROW(LabeledExample({1.0, 2.0}, 1));
    CHECK_NOTHROW(LabeledExample({}, -1));
    CHECK_THROWS_AS(LabeledExample({1.0}, 0), InvalidInput);
    CHECK_THROWS_AS(LabeledExample({1.0}, 2), InvalidInput);
    CHECK_THROWS_AS(LabeledExample({std::nan("")}, 1), InvalidInput);
    CHECK_THROWS_AS(LabeledExample({std::numeric_limits<double>::infinity()}, 1), InvalidInput);

    const LabeledExample ex({0.5}, 1);
    CHECK(ex.flipped().label() == -1);
    CHECK(ex.flipped().features() == ex.features());
}

TEST_CASE("margin is label times output") {
    const DecisionStump h(0, 0.0, 1);
    CHECK(compute_margin(h, LabeledExample({1.0}, 1)) == 1);
    CHECK(compute_margin(h, LabeledExample({1.0}, -1)) == -1);
    CHECK(compute_margin(h, LabeledExample({-1.0}, -1)) == 1);
    // sign(0) = +1
    CHECK(compute_margin(h, LabeledExample({0.0}, 1)) == 1);
}

TEST_CASE("build_margin_matrix") {
    std::vector<HypothesisPtr> hyps{std::make_shared<DecisionStump>(0, 0.0, 1),
                                    std::make_shared<DecisionStump>(0, 0.0, -1)};
    std::vector<LabeledExample> data{{{1.0}, 1}, {{-1.0}, 1}, {{2.0}, -1}};
    const auto m = build_margin_matrix(hyps, data);
    CHECK(m == MarginMatrix{{1, -1}, {-1, 1}, {-1, 1}});

    SUBCASE("abstaining hypothesis is rejected") {
        std::vector<HypothesisPtr> bad{std::make_shared<Constant>(0)};
        CHECK_THROWS_AS(build_margin_matrix(bad, data), InvalidInput);
    }
    SUBCASE("empty inputs") {
        CHECK_THROWS_AS(build_margin_matrix({}, data), InvalidInput);
        CHECK_THROWS_AS(build_margin_matrix(hyps, {}), InvalidInput);
    }
}

TEST_CASE("margin matrix invariants") {
    CHECK_THROWS_AS(MarginMatrix(0, 1, {}), InvalidInput);
    CHECK_THROWS_AS(MarginMatrix(1, 0, {}), InvalidInput);
    CHECK_THROWS_AS(MarginMatrix(1, 2, {1}), InvalidInput);
    CHECK_THROWS_AS(MarginMatrix(1, 2, {1, 0}), InvalidInput);
    CHECK_THROWS_AS((MarginMatrix{{1, 1}, {1}}), InvalidInput);

    const MarginMatrix m{{1, -1}, {-1, -1}, {1, 1}};
    CHECK(m.rows() == 3);
    CHECK(m.cols() == 2);
    CHECK(m(2, 1) == 1);
    CHECK(m.prefix(2) == MarginMatrix{{1, -1}, {-1, -1}});
    CHECK(m.slice(1, 3) == MarginMatrix{{-1, -1}, {1, 1}});
    CHECK_THROWS_AS(m.slice(2, 2), InvalidInput);
}

TEST_CASE("strong classifier scoring") {
    std::vector<HypothesisPtr> hyps{std::make_shared<Constant>(1), std::make_shared<Constant>(-1)};
    CHECK_THROWS_AS(StrongClassifier(hyps, {1.0}), InvalidInput);
    CHECK_THROWS_AS(StrongClassifier(hyps, {1.0, std::nan("")}), InvalidInput);

    const StrongClassifier c(hyps, {2.0, 0.5});
    const std::vector<double> x{0.0};
    CHECK(score(c, x).value == doctest::Approx(1.5));
    CHECK(score(c, x).label == 1);
    CHECK(score(c.with_alphas({0.5, 2.0}), x).label == -1);
    // exact tie predicts +1
    CHECK(score(c.with_alphas({1.0, 1.0}), x).label == 1);

    const std::vector<Margin> outputs{1, -1, 1};
    const std::vector<double> alphas{0.25, 1.0, 0.5};
    CHECK(score_outputs(alphas, outputs) == doctest::Approx(-0.25));
}

TEST_CASE("margin csv round trip") {
    const auto m = testing::random_margins(37, 6, 3);
    std::stringstream ss;
    write_margin_csv(ss, m);
    CHECK(ss.str().rfind("m_1,m_2,m_3,m_4,m_5,m_6\n", 0) == 0);
    CHECK(read_margin_csv(ss) == m);

    std::istringstream wrong_header("a,b\n1,1\n");
    CHECK_THROWS_AS(read_margin_csv(wrong_header), FormatError);
    std::istringstream bad_cell("m_1,m_2\n1,0\n");
    CHECK_THROWS_AS(read_margin_csv(bad_cell), FormatError);
    std::istringstream short_row("m_1,m_2\n1\n");
    CHECK_THROWS_AS(read_margin_csv(short_row), FormatError);
}
