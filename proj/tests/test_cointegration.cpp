#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "bubblescope/engle_granger.hpp"
#include "mmix.hpp"

using namespace bubblescope;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// y = 2 + 3x + sigma*noise on a random-walk x, the canonical cointegrated pair
std::pair<std::vector<double>, std::vector<double>> cointegrated_pair(MMIX& g, int n,
                                                                      double sigma) {
    const auto x = g.random_walk(n);
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) y[i] = 2.0 + 3.0 * x[i] + sigma * g.normal();
    return {y, x};
}

}  // namespace

TEST_CASE("engle granger matches a frozen reference run", "[cointegration]") {
    MMIX g(13);
    const auto [y, x] = cointegrated_pair(g, 300, 0.1);
    REQUIRE_THAT(x[0], WithinRel(-0.8743919957366054, 1e-14));
    REQUIRE_THAT(y[0], WithinRel(-0.563140585622383, 1e-13));

    const CointegrationResult r = engle_granger(y, x);
    REQUIRE(r.eg_statistic.has_value());
    CHECK_THAT(*r.eg_statistic, WithinAbs(-16.447395997702024, 1e-7));
    CHECK(*r.eg_p_value < 1e-20);
    CHECK(r.cointegrated_5pct);
    CHECK(r.cointegrated_1pct);
    CHECK_FALSE(r.degenerate);

    MMIX g2(17);
    const auto x2 = g2.random_walk(300);
    const auto y2 = g2.random_walk(300);
    const CointegrationResult indep = engle_granger(y2, x2);
    CHECK_THAT(*indep.eg_statistic, WithinAbs(-3.360863244565296, 1e-8));
    CHECK_THAT(*indep.eg_p_value, WithinAbs(0.13440216767842483, 1e-8));
    CHECK_FALSE(indep.cointegrated_5pct);
}

TEST_CASE("engle granger step-1 residuals sum to zero", "[cointegration]") {
    MMIX g(77);
    const auto x = g.random_walk(200);
    std::vector<double> y(200);
    for (int i = 0; i < 200; ++i) y[i] = 1.0 + 0.5 * x[i] + g.normal();
    // re-run the step-1 regression directly
    Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), 200);
    Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.data(), 200);
    const OLSResult step1 = ols(build_design(200, true, true, {xv}), yv);
    CHECK(std::abs(step1.residuals.sum()) < 1e-8);
}

TEST_CASE("identical series degenerate to a flagged perfect fit", "[cointegration]") {
    MMIX g(21);
    const auto x = g.random_walk(150);
    const CointegrationResult r = engle_granger(x, x);
    CHECK(r.degenerate);
    CHECK(*r.eg_p_value == 0.0);
    CHECK(r.cointegrated_5pct);
    CHECK(r.cointegrated_at(0.05));
}

TEST_CASE("span mismatches are rejected", "[cointegration]") {
    MMIX g(22);
    const auto x = g.random_walk(150);
    const auto y = g.random_walk(151);
    CHECK_THROWS_AS(engle_granger(y, x), std::invalid_argument);

    const PriceSeries a(MonthStamp{2008, 1}, {1.0, 2.0, 3.0});
    const PriceSeries b(MonthStamp{2008, 2}, {1.0, 2.0, 3.0});
    CHECK_THROWS_AS(engle_granger(a, b), std::invalid_argument);
}

TEST_CASE("bubble rule: stationary price means no bubble", "[cointegration]") {
    MMIX g(29);
    const auto price = g.ar1(250, 0.5);
    MMIX g2(7);
    const auto fundamental = g2.random_walk(250);
    const CointegrationResult r = fundamental_bubble_test(price, fundamental);
    CHECK_FALSE(r.bubble_flag);
    REQUIRE(r.y_order.has_value());
    CHECK(*r.y_order == 0);
    CHECK_FALSE(r.x_order.has_value());    // never needed
    CHECK_FALSE(r.eg_statistic.has_value());  // test never ran
    CHECK(!r.note.empty());
}

TEST_CASE("bubble rule: stationary fundamental under a wandering price is a bubble",
          "[cointegration]") {
    MMIX g(7);
    const auto price = g.random_walk(250);
    MMIX g2(29);
    const auto fundamental = g2.ar1(250, 0.5);
    const CointegrationResult r = fundamental_bubble_test(price, fundamental);
    CHECK(r.bubble_flag);
    CHECK(*r.y_order == 1);
    CHECK(*r.x_order == 0);
    CHECK_FALSE(r.eg_statistic.has_value());
}

TEST_CASE("bubble rule: cointegrated pair is not a bubble", "[cointegration]") {
    MMIX g(13);
    const auto [y, x] = cointegrated_pair(g, 300, 0.1);
    const CointegrationResult r = fundamental_bubble_test(y, x);
    CHECK_FALSE(r.bubble_flag);
    CHECK(*r.y_order == 1);
    CHECK(*r.x_order == 1);
    CHECK(r.cointegrated_5pct);
}

TEST_CASE("bubble rule: two independent walks flag a bubble", "[cointegration]") {
    MMIX g(17);
    const auto x = g.random_walk(300);
    const auto y = g.random_walk(300);
    const CointegrationResult r = fundamental_bubble_test(y, x);
    CHECK(r.bubble_flag);
    CHECK_FALSE(r.cointegrated_5pct);
}

TEST_CASE("engle granger detects constructed cointegration",
          "[cointegration][montecarlo]") {
    MMIX g(4242);
    const int reps = 200;
    int detected = 0;
    for (int r = 0; r < reps; ++r) {
        const auto [y, x] = cointegrated_pair(g, 300, 0.1);
        if (engle_granger(y, x).cointegrated_5pct) ++detected;
    }
    CHECK(detected >= static_cast<int>(0.95 * reps));
}

TEST_CASE("engle granger size on independent random walks",
          "[cointegration][montecarlo]") {
    MMIX g(31337);
    const int reps = 200;
    int false_alarms = 0;
    for (int r = 0; r < reps; ++r) {
        const auto x = g.random_walk(300);
        const auto y = g.random_walk(300);
        if (engle_granger(y, x).cointegrated_5pct) ++false_alarms;
    }
    CHECK(false_alarms <= static_cast<int>(0.10 * reps));
}
