#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "bubblescope/lppls.hpp"
#include "bubblescope/month.hpp"
#include "bubblescope/rng.hpp"
#include "bubblescope/series.hpp"

namespace bubblescope {

// Jump-diffusion generator settings. The simulation clock runs in months
// since the first emitted observation, and hp.t_c lives on that clock; the
// emitted series is stamped starting at `start`.
struct SimConfig {
    HazardParams hp;
    double sigma = 0.0;      // diffusion per sqrt(month)
    double p0 = 100.0;       // initial price
    int horizon = 120;       // months simulated
    double step = 1.0 / 32;  // Euler step in months; must divide one month evenly
    std::uint64_t rng_seed = 0;
    MonthStamp start{2008, 1};

    int steps_per_month() const {
        const double k = 1.0 / step;
        const int ki = static_cast<int>(std::lround(k));
        if (!(step > 0.0) || step > 1.0 || ki < 1 || std::abs(k - ki) > 1e-9) {
            throw std::invalid_argument("sim config: step must evenly divide one month");
        }
        return ki;
    }

    void validate() const {
        hp.validate();
        if (!(sigma >= 0.0)) throw std::invalid_argument("sim config: sigma must be >= 0");
        if (!(p0 > 0.0)) throw std::invalid_argument("sim config: p0 must be > 0");
        if (horizon < 1) throw std::invalid_argument("sim config: horizon must be >= 1 month");
        steps_per_month();
    }
};

struct SimPath {
    PriceSeries prices;
    std::optional<MonthStamp> crash_time;
    std::vector<double> drift_trace;  // drift applied at each Euler step
};

// Euler-Maruyama on the log-price: drift kappa*h(t) while the bubble is alive,
// diffusion sigma throughout, and a per-step crash probability min(h*step, 1).
// A crash is one-shot: the price is multiplied by (1-kappa) in place of that
// step's move, and the drift is zero from then on (likewise past t_c if no
// crash ever fires). Identical config and seed give a bitwise-identical path.
inline SimPath simulate(const SimConfig& cfg) {
    cfg.validate();
    const int k = cfg.steps_per_month();
    const double dt = cfg.step;
    const long total_steps = static_cast<long>(cfg.horizon) * k;

    // The discrete hazard is only faithful if capping h*dt at 1 is rare; the
    // grid is deterministic, so reject coarse configs up front.
    long capped = 0;
    for (long n = 0; n < total_steps; ++n) {
        const double t = static_cast<double>(n) / k;
        if (t < cfg.hp.t_c && hazard_rate(t, cfg.hp) * dt > 1.0) ++capped;
    }
    if (capped > total_steps / 100) {
        throw std::invalid_argument("sim config: step too coarse for the hazard (h*step > 1 at " +
                                    std::to_string(capped) + " of " +
                                    std::to_string(total_steps) + " steps)");
    }

    Rng rng(cfg.rng_seed);
    const double sqrt_dt = std::sqrt(dt);
    double lp = std::log(cfg.p0);
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(cfg.horizon) + 1);
    values.push_back(cfg.p0);

    std::optional<MonthStamp> crash_time;
    std::vector<double> drift_trace;
    drift_trace.reserve(static_cast<std::size_t>(total_steps));
    bool crashed = false;

    for (long n = 0; n < total_steps; ++n) {
        const double t = static_cast<double>(n) / k;
        bool crash_now = false;
        double mu = 0.0;
        if (!crashed && t < cfg.hp.t_c) {
            const double h = hazard_rate(t, cfg.hp);
            const double p_crash = std::min(h * dt, 1.0);
            if (rng.unit() < p_crash) {
                crash_now = true;
            } else {
                mu = cfg.hp.kappa * h;
            }
        }
        if (crash_now) {
            crashed = true;
            crash_time = cfg.start.plus_months(static_cast<int>(std::floor(t)));
            lp += std::log1p(-cfg.hp.kappa);
        } else {
            lp += mu * dt + cfg.sigma * sqrt_dt * rng.normal();
        }
        drift_trace.push_back(crash_now ? 0.0 : mu);
        if ((n + 1) % k == 0) values.push_back(std::exp(lp));
    }

    return SimPath{PriceSeries(cfg.start, std::move(values)), crash_time,
                   std::move(drift_trace)};
}

// Expected log-price of a sigma=0 path conditional on no crash: log p0 plus
// the integral of kappa*h. The oscillatory part integrates in closed form via
//   int tau^(m-1) cos(omega ln tau - phi') dtau = Re[e^(-i phi') tau^(m+i omega)/(m+i omega)].
inline double survival_log_price(double t, const SimConfig& cfg) {
    const HazardParams& hp = cfg.hp;
    if (!(t < hp.t_c)) {
        throw std::invalid_argument("survival_log_price: t must precede the critical time");
    }
    const double tau = hp.t_c - t;
    const double power_part =
        hp.kappa * hp.alpha / hp.m * (std::pow(hp.t_c, hp.m) - std::pow(tau, hp.m));

    double osc_part = 0.0;
    if (hp.beta_osc != 0.0) {
        const std::complex<double> expo(hp.m, hp.omega);
        const std::complex<double> upper = std::exp(expo * std::log(hp.t_c));
        const std::complex<double> lower = std::exp(expo * std::log(tau));
        const std::complex<double> rot = std::polar(1.0, -hp.phi_prime);
        osc_part = hp.kappa * hp.alpha * hp.beta_osc *
                   (rot * (upper - lower) / expo).real();
    }
    return std::log(cfg.p0) + power_part + osc_part;
}

}  // namespace bubblescope
