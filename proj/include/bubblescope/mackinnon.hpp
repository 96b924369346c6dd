#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bubblescope {

// Deterministic terms included in a unit-root regression.
enum class Deterministics { none, constant, constant_trend };

namespace mackinnon {

// Response-surface coefficients for asymptotic p-values of the ADF tau
// statistic (MacKinnon 1994/1996 vintage), indexed by deterministic spec and
// the number of stochastic variables N (N=1: plain unit root; N=2: residual
// test for one cointegrating regressor). p = Phi(c0 + c1*x + c2*x^2 [+ c3*x^3])
// with the small-p polynomial used for x <= tau_star and the large-p one
// otherwise; outside [tau_min, tau_max] the p-value saturates at 0 or 1.

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Surface {
    double tau_star;
    double tau_min;
    double tau_max;
    std::array<double, 3> smallp;  // ascending powers
    std::array<double, 4> largep;  // ascending powers
};

// [spec][N-1], specs ordered none, constant, constant_trend; N in {1, 2}.
inline constexpr Surface kSurfaces[3][2] = {
    // none
    {{-1.04, -19.04, kInf, {0.6344, 1.2378, 0.032496}, {0.4797, 0.93557, -0.06999, 0.033066}},
     {-1.53, -19.62, 1.51, {1.9129, 1.3857, 0.035322}, {1.5578, 0.8558, -0.2083, -0.033549}}},
    // constant
    {{-1.61, -18.83, 2.74, {2.1659, 1.4412, 0.038269}, {1.7339, 0.93202, -0.12745, -0.010368}},
     {-2.62, -18.86, 0.92, {2.92, 1.5012, 0.039796}, {2.1945, 0.64695, -0.29198, -0.042377}}},
    // constant + trend
    {{-2.89, -16.18, 0.70, {3.2512, 1.6047, 0.049588}, {2.5261, 0.61654, -0.37956, -0.060285}},
     {-3.19, -21.15, 0.63, {3.6646, 1.5419, 0.036448}, {2.85, 0.5272, -0.36622, -0.051695}}},
};

// Finite-sample critical values (MacKinnon 2010): cv = b0 + b1/T + b2/T^2 + b3/T^3.
struct CritRow {
    std::array<double, 4> b;
};
struct CritSurface {
    CritRow at_1pct, at_5pct, at_10pct;
};

inline constexpr CritSurface kCritNone_N1 = {
    {{-2.56574, -2.2358, -3.627, 0.0}},
    {{-1.941, -0.2686, -3.365, 31.223}},
    {{-1.61682, 0.2656, -2.714, 25.364}},
};
inline constexpr CritSurface kCritConst[2] = {
    {{{-3.43035, -6.5393, -16.786, -79.433}},
     {{-2.86154, -2.8903, -4.234, -40.04}},
     {{-2.56677, -1.5384, -2.809, 0.0}}},
    {{{-3.89644, -10.9519, -33.527, 0.0}},
     {{-3.33613, -6.1101, -6.823, 0.0}},
     {{-3.04445, -4.2412, -2.72, 0.0}}},
};
inline constexpr CritSurface kCritTrend[2] = {
    {{{-3.95877, -9.0531, -28.428, -134.155}},
     {{-3.41049, -4.3904, -9.036, -45.374}},
     {{-3.12705, -2.5856, -3.925, -22.38}}},
    {{{-4.32762, -15.4387, -35.679, 0.0}},
     {{-3.78057, -9.5106, -12.074, 0.0}},
     {{-3.49631, -7.0815, -7.538, 21.892}}},
};

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace mackinnon

// Asymptotic p-value of an ADF tau statistic. n_vars = 1 for a plain
// unit-root test, 2 for the residual-based test with one regressor.
inline double mackinnon_p(double stat, Deterministics spec, int n_vars = 1) {
    if (n_vars < 1 || n_vars > 2) {
        throw std::invalid_argument("mackinnon_p: n_vars must be 1 or 2");
    }
    const auto& s = mackinnon::kSurfaces[static_cast<int>(spec)][n_vars - 1];
    if (stat > s.tau_max) return 1.0;
    if (stat < s.tau_min) return 0.0;
    double z = 0.0;
    if (stat <= s.tau_star) {
        const auto& c = s.smallp;
        z = c[0] + stat * (c[1] + stat * c[2]);
    } else {
        const auto& c = s.largep;
        z = c[0] + stat * (c[1] + stat * (c[2] + stat * c[3]));
    }
    return mackinnon::normal_cdf(z);
}

// Finite-sample critical value at level in {0.01, 0.05, 0.10} for a sample of
// nobs effective observations.
inline double mackinnon_crit(double level, Deterministics spec, int n_vars, int nobs) {
    if (nobs <= 0) throw std::invalid_argument("mackinnon_crit: nobs must be positive");
    const mackinnon::CritSurface* surf = nullptr;
    switch (spec) {
        case Deterministics::none:
            if (n_vars != 1) {
                throw std::invalid_argument("mackinnon_crit: no-deterministics table only for n_vars=1");
            }
            surf = &mackinnon::kCritNone_N1;
            break;
        case Deterministics::constant:
            if (n_vars < 1 || n_vars > 2) throw std::invalid_argument("mackinnon_crit: n_vars must be 1 or 2");
            surf = &mackinnon::kCritConst[n_vars - 1];
            break;
        case Deterministics::constant_trend:
            if (n_vars < 1 || n_vars > 2) throw std::invalid_argument("mackinnon_crit: n_vars must be 1 or 2");
            surf = &mackinnon::kCritTrend[n_vars - 1];
            break;
    }
    const mackinnon::CritRow* row = nullptr;
    if (level == 0.01) row = &surf->at_1pct;
    else if (level == 0.05) row = &surf->at_5pct;
    else if (level == 0.10) row = &surf->at_10pct;
    else throw std::invalid_argument("mackinnon_crit: level must be 0.01, 0.05 or 0.10");
    const double t = static_cast<double>(nobs);
    const auto& b = row->b;
    return b[0] + b[1] / t + b[2] / (t * t) + b[3] / (t * t * t);
}

}  // namespace bubblescope
