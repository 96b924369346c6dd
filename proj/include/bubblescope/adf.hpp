#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "bubblescope/common.hpp"
#include "bubblescope/mackinnon.hpp"
#include "bubblescope/ols.hpp"

namespace bubblescope {

struct LagPolicy {
    // aic: search 0..max_lags minimizing AIC on a common trimmed sample, then
    //      re-estimate at the chosen lag on the full usable sample.
    //      max_lags < 0 means the Schwert rule floor(12*(T/100)^0.25).
    // fixed: use exactly max_lags augmentation lags.
    enum class Mode { aic, fixed };
    Mode mode = Mode::aic;
    int max_lags = -1;
};

struct ADFResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int lags_used = 0;
    Deterministics spec = Deterministics::constant;
    int nobs = 0;  // effective observations in the final regression
    double crit_1pct = 0.0, crit_5pct = 0.0, crit_10pct = 0.0;

    bool rejects_at(double level) const { return p_value < level; }
};

namespace detail {

// Regression rows for Δy_t on [deterministics | y_{t-1} | Δy_{t-1..t-p}],
// using the last n_eff differences. Returns (X, dy) with the level column
// first after deterministics so the t-ratio column index is fixed.
inline std::pair<Eigen::MatrixXd, Eigen::VectorXd> adf_design(
    const std::vector<double>& y, int p, int n_eff, Deterministics spec) {
    const int T = static_cast<int>(y.size());
    const int Td = T - 1;
    const int first = Td - n_eff;  // first usable difference index
    const int ndet = spec == Deterministics::none ? 0
                     : spec == Deterministics::constant ? 1 : 2;
    Eigen::MatrixXd X(n_eff, ndet + 1 + p);
    Eigen::VectorXd dy(n_eff);
    for (int i = 0; i < n_eff; ++i) {
        const int idx = first + i;  // dy[idx] = y[idx+1] - y[idx]
        dy(i) = y[idx + 1] - y[idx];
        int col = 0;
        if (ndet >= 1) X(i, col++) = 1.0;
        if (ndet == 2) X(i, col++) = static_cast<double>(i + 1);
        X(i, col++) = y[idx];
        for (int j = 1; j <= p; ++j) X(i, col++) = y[idx - j + 1] - y[idx - j];
    }
    return {std::move(X), std::move(dy)};
}

inline double aic_of(const OLSResult& r) {
    return r.n * std::log(r.sse / r.n) + 2.0 * r.k;
}

}  // namespace detail

// Augmented Dickey-Fuller regression Δy_t = [α + βt] + γ y_{t-1} + Σ δ_i Δy_{t-i} + ε_t;
// the reported statistic is the t-ratio on γ, its p-value from the MacKinnon
// response surface.
inline ADFResult adf_test(const std::vector<double>& y,
                          Deterministics spec = Deterministics::constant,
                          LagPolicy policy = {}) {
    const int T = static_cast<int>(y.size());
    if (T < 3) throw std::invalid_argument("adf_test: series too short");
    bool constant_series = true;
    for (double v : y) {
        if (!std::isfinite(v)) throw std::invalid_argument("adf_test: non-finite value");
        if (v != y.front()) constant_series = false;
    }
    if (constant_series) throw numeric_error("adf_test: constant series (zero variance)");

    int max_lags = policy.max_lags;
    if (policy.mode == LagPolicy::Mode::aic && max_lags < 0) {
        max_lags = static_cast<int>(std::floor(12.0 * std::pow(T / 100.0, 0.25)));
    }
    if (max_lags < 0) throw std::invalid_argument("adf_test: negative lag count");
    if (T < 20 + max_lags) {
        throw std::invalid_argument("adf_test: series too short (need >= " +
                                    std::to_string(20 + max_lags) + " observations for " +
                                    std::to_string(max_lags) + " lags, have " +
                                    std::to_string(T) + ")");
    }

    int lags = max_lags;
    if (policy.mode == LagPolicy::Mode::aic) {
        // Common-sample AIC search: every candidate sees the same rows.
        const int n_eff = (T - 1) - max_lags;
        double best_aic = 0.0;
        int best_p = 0;
        for (int p = 0; p <= max_lags; ++p) {
            auto [X, dy] = detail::adf_design(y, p, n_eff, spec);
            const double aic = detail::aic_of(ols(X, dy));
            if (p == 0 || aic < best_aic) {
                best_aic = aic;
                best_p = p;
            }
        }
        lags = best_p;
    }

    const int n_eff = (T - 1) - lags;
    auto [X, dy] = detail::adf_design(y, lags, n_eff, spec);
    const OLSResult reg = ols(X, dy);
    const int gamma_col = spec == Deterministics::none ? 0
                          : spec == Deterministics::constant ? 1 : 2;

    ADFResult r;
    r.statistic = reg.tstat(gamma_col);
    r.p_value = mackinnon_p(r.statistic, spec, 1);
    r.lags_used = lags;
    r.spec = spec;
    r.nobs = n_eff;
    r.crit_1pct = mackinnon_crit(0.01, spec, 1, n_eff);
    r.crit_5pct = mackinnon_crit(0.05, spec, 1, n_eff);
    r.crit_10pct = mackinnon_crit(0.10, spec, 1, n_eff);
    return r;
}

// Order-of-integration verdict at the 5% level: 0 if the level series rejects
// a unit root (constant+trend ADF), 1 if its first difference does
// (constant ADF); anything deeper aborts.
inline int integration_order(const std::vector<double>& y, double level = 0.05) {
    if (adf_test(y, Deterministics::constant_trend).rejects_at(level)) return 0;
    std::vector<double> dy(y.size() - 1);
    for (std::size_t i = 0; i + 1 < y.size(); ++i) dy[i] = y[i + 1] - y[i];
    if (adf_test(dy, Deterministics::constant).rejects_at(level)) return 1;
    throw numeric_error("integration order >= 2: differencing once does not restore stationarity");
}

}  // namespace bubblescope
