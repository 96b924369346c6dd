#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "bubblescope/lppls.hpp"
#include "bubblescope/simulate.hpp"

using namespace bubblescope;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SimConfig quiet_config() {
    SimConfig cfg;
    cfg.hp.alpha = 0.01;
    cfg.hp.beta_osc = 0.0;
    cfg.hp.m = 0.5;
    cfg.hp.omega = 7.0;
    cfg.hp.phi_prime = 0.0;
    cfg.hp.t_c = 60.0;
    cfg.hp.kappa = 0.9;
    cfg.sigma = 0.0;
    cfg.p0 = 100.0;
    cfg.horizon = 24;
    cfg.step = 1.0 / 64;
    return cfg;
}

}  // namespace

TEST_CASE("identical configuration gives a bitwise-identical path", "[simulate]") {
    SimConfig cfg = quiet_config();
    cfg.sigma = 0.02;
    cfg.rng_seed = 12345;
    const SimPath a = simulate(cfg);
    const SimPath b = simulate(cfg);
    REQUIRE(a.prices.size() == b.prices.size());
    for (std::size_t i = 0; i < a.prices.size(); ++i) {
        CHECK(a.prices[i] == b.prices[i]);
    }
    CHECK(a.crash_time == b.crash_time);
    CHECK(a.drift_trace == b.drift_trace);

    cfg.rng_seed = 54321;
    const SimPath c = simulate(cfg);
    bool any_differ = false;
    for (std::size_t i = 0; i < a.prices.size(); ++i) {
        any_differ = any_differ || a.prices[i] != c.prices[i];
    }
    CHECK(any_differ);
}

TEST_CASE("path bookkeeping", "[simulate]") {
    SimConfig cfg = quiet_config();
    cfg.start = MonthStamp{2010, 7};
    const SimPath path = simulate(cfg);
    CHECK(path.prices.size() == 25);  // horizon + the initial observation
    CHECK(path.prices.start() == MonthStamp{2010, 7});
    CHECK(path.prices.end() == MonthStamp{2012, 7});
    CHECK(path.prices[0] == 100.0);
    CHECK(path.drift_trace.size() == 24u * 64u);
}

TEST_CASE("zero crash size freezes the price", "[simulate]") {
    SimConfig cfg = quiet_config();
    cfg.hp.kappa = 0.0;
    cfg.rng_seed = 9;
    const SimPath path = simulate(cfg);
    for (std::size_t i = 0; i < path.prices.size(); ++i) {
        CHECK_THAT(path.prices[i], WithinRel(100.0, 1e-14));
    }
    for (std::size_t i = 2; i < path.prices.size(); ++i) {
        CHECK(path.prices[i] == path.prices[1]);
    }
    for (double mu : path.drift_trace) CHECK(mu == 0.0);
}

TEST_CASE("noiseless surviving path follows the closed-form mean", "[simulate]") {
    SimConfig cfg = quiet_config();
    cfg.rng_seed = 3;
    const SimPath path = simulate(cfg);
    REQUIRE_FALSE(path.crash_time.has_value());

    const double want = survival_log_price(24.0, cfg);
    const double got = std::log(path.prices[24]);
    const double err64 = std::abs(got - want);
    CHECK(err64 < 1e-3);

    // Euler drift integration is first order: halving the step shrinks the gap
    SimConfig fine = cfg;
    fine.step = 1.0 / 128;
    fine.rng_seed = 5;
    const SimPath fp = simulate(fine);
    REQUIRE_FALSE(fp.crash_time.has_value());
    const double err128 = std::abs(std::log(fp.prices[24]) - want);
    CHECK(err128 < err64);
}

TEST_CASE("closed-form survival mean against quadrature references", "[simulate]") {
    SimConfig cfg;
    cfg.hp.alpha = 0.15;
    cfg.hp.beta_osc = 0.4;
    cfg.hp.m = 0.6;
    cfg.hp.omega = 7.0;
    cfg.hp.t_c = 40.0;
    cfg.hp.phi_prime = 0.8;
    cfg.hp.kappa = 0.25;
    cfg.p0 = 100.0;

    // references from adaptive quadrature of kappa*h at 50-digit precision
    CHECK_THAT(survival_log_price(6.0, cfg), WithinRel(4.674048018286613, 1e-12));
    CHECK_THAT(survival_log_price(18.0, cfg), WithinRel(4.765024914488258, 1e-12));
    CHECK_THAT(survival_log_price(33.5, cfg), WithinRel(4.985331084761059, 1e-12));

    CHECK(survival_log_price(0.0, cfg) == std::log(100.0));
    CHECK_THROWS_AS(survival_log_price(40.0, cfg), std::invalid_argument);
    CHECK_THROWS_AS(survival_log_price(41.0, cfg), std::invalid_argument);
}

TEST_CASE("survival mean is the log-periodic price law", "[simulate]") {
    SimConfig cfg;
    cfg.hp.alpha = 0.15;
    cfg.hp.beta_osc = 0.4;
    cfg.hp.m = 0.6;
    cfg.hp.omega = 7.0;
    cfg.hp.t_c = 40.0;
    cfg.hp.phi_prime = 0.8;
    cfg.hp.kappa = 0.25;
    cfg.p0 = 100.0;

    // the drift integral collapses onto the fitting form: B and C through the
    // coefficient identities, the phase shifted by atan2(omega, m)
    const auto [B, C] = coefficient_identities(cfg.hp);
    const std::complex<double> expo(cfg.hp.m, cfg.hp.omega);
    const std::complex<double> rot = std::polar(1.0, -cfg.hp.phi_prime);
    const double A = std::log(cfg.p0) +
                     cfg.hp.kappa * cfg.hp.alpha / cfg.hp.m * std::pow(cfg.hp.t_c, cfg.hp.m) +
                     cfg.hp.kappa * cfg.hp.alpha * cfg.hp.beta_osc *
                         (rot * std::exp(expo * std::log(cfg.hp.t_c)) / expo).real();

    LPPLSParams p;
    p.t_c = cfg.hp.t_c;
    p.m = cfg.hp.m;
    p.omega = cfg.hp.omega;
    p.phi = cfg.hp.phi_prime + std::atan2(cfg.hp.omega, cfg.hp.m);
    p.A = A;
    p.B = B;
    p.C = C;
    CHECK(p.bubble_regime());
    for (double t : {3.0, 11.5, 26.0, 39.0, 39.9}) {
        CHECK_THAT(lppls_log_price(t, p), WithinRel(survival_log_price(t, cfg), 1e-10));
    }
}

TEST_CASE("a crash drops the price once and kills the drift", "[simulate]") {
    SimConfig cfg;
    cfg.hp.alpha = 0.2;
    cfg.hp.beta_osc = 0.0;
    cfg.hp.m = 0.5;
    cfg.hp.omega = 8.0;
    cfg.hp.t_c = 36.0;
    cfg.hp.kappa = 0.4;
    cfg.sigma = 0.0;
    cfg.horizon = 30;
    cfg.step = 1.0 / 32;

    // about three in four seeds crash; take the first that does
    SimPath path = simulate(cfg);
    for (std::uint64_t seed = 1; seed <= 64 && !path.crash_time; ++seed) {
        cfg.rng_seed = seed;
        path = simulate(cfg);
    }
    REQUIRE(path.crash_time.has_value());
    const int j = month_diff(*path.crash_time, cfg.start);
    REQUIRE(j >= 0);
    REQUIRE(j < cfg.horizon);

    // strictly rising while the bubble is alive
    for (int i = 0; i < j; ++i) CHECK(path.prices[i + 1] > path.prices[i]);
    // the crash month loses about kappa, give or take that month's drift
    const double change = std::log(path.prices[j + 1] / path.prices[j]);
    CHECK(change > std::log1p(-cfg.hp.kappa) - 1e-12);
    CHECK(change < std::log1p(-cfg.hp.kappa) + 0.05);
    // flat afterwards: no drift, no diffusion
    for (std::size_t i = j + 2; i < path.prices.size(); ++i) {
        CHECK(path.prices[i] == path.prices[j + 1]);
    }

    // the drift trace pinpoints the crash step inside the crash month
    std::size_t s = 0;
    while (s < path.drift_trace.size() && path.drift_trace[s] > 0.0) ++s;
    REQUIRE(s < path.drift_trace.size());
    CHECK(static_cast<int>(s / 32) == j);
    for (std::size_t i = s; i < path.drift_trace.size(); ++i) {
        CHECK(path.drift_trace[i] == 0.0);
    }
}

TEST_CASE("configuration validation", "[simulate]") {
    SimConfig cfg = quiet_config();
    cfg.step = 0.3;  // does not divide a month evenly
    CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
    cfg = quiet_config();
    cfg.step = 0.0;
    CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
    cfg = quiet_config();
    cfg.step = 2.0;
    CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
    cfg = quiet_config();
    cfg.horizon = 0;
    CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
    cfg = quiet_config();
    cfg.sigma = -0.1;
    CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
    cfg = quiet_config();
    cfg.p0 = 0.0;
    CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
    cfg = quiet_config();
    cfg.hp.beta_osc = 1.0;
    CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
    cfg = quiet_config();
    cfg.hp.kappa = 1.5;
    CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
}

TEST_CASE("steps too coarse for the hazard are rejected", "[simulate]") {
    SimConfig cfg;
    cfg.hp.alpha = 5.0;
    cfg.hp.m = 0.1;
    cfg.hp.t_c = 10.0;
    cfg.hp.kappa = 0.5;
    cfg.horizon = 12;
    cfg.step = 1.0;
    CHECK_THROWS_AS(simulate(cfg), std::invalid_argument);
    // the same hazard at a fine step is acceptable
    cfg.step = 1.0 / 128;
    CHECK_NOTHROW(simulate(cfg));
}

TEST_CASE("crash frequency matches the hazard integral", "[simulate][montecarlo]") {
    SimConfig cfg;
    cfg.hp.alpha = 0.15;
    cfg.hp.beta_osc = 0.4;
    cfg.hp.m = 0.6;
    cfg.hp.omega = 7.0;
    cfg.hp.t_c = 40.0;
    cfg.hp.phi_prime = 0.8;
    cfg.hp.kappa = 0.25;
    cfg.sigma = 0.0;
    cfg.horizon = 36;
    cfg.step = 1.0 / 32;

    // the hazard integral is the kappa=1, p0=1 survival drift
    SimConfig probe = cfg;
    probe.hp.kappa = 1.0;
    probe.p0 = 1.0;
    const double big_lambda = survival_log_price(36.0, probe);
    const double p_crash = 1.0 - std::exp(-big_lambda);

    const int reps = 4000;
    int crashes = 0;
    for (int i = 0; i < reps; ++i) {
        cfg.rng_seed = 700000 + static_cast<std::uint64_t>(i);
        if (simulate(cfg).crash_time.has_value()) ++crashes;
    }
    const double freq = static_cast<double>(crashes) / reps;
    CHECK_THAT(freq, WithinAbs(p_crash, 0.02));
}
