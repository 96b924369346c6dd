#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "bubblescope/adf.hpp"
#include "bubblescope/ols.hpp"
#include "bubblescope/series.hpp"

namespace bubblescope {

struct CointegrationResult {
    std::optional<double> eg_statistic;  // tau on step-2 residual regression
    std::optional<double> eg_p_value;
    std::optional<int> x_order;          // integration orders when the decision
    std::optional<int> y_order;          // tree computed them
    bool cointegrated_1pct = false;
    bool cointegrated_5pct = false;
    bool cointegrated_10pct = false;
    bool degenerate = false;             // step-1 residuals numerically zero
    bool bubble_flag = false;
    std::string note;

    bool cointegrated_at(double level) const {
        if (degenerate) return true;
        return eg_p_value.has_value() && *eg_p_value < level;
    }
};

// Two-step residual-based cointegration test: OLS of y on {1, t, x}, then a
// no-deterministics ADF on the residuals, p-value from the two-variable
// trend-case response surface.
inline CointegrationResult engle_granger(const std::vector<double>& y,
                                         const std::vector<double>& x,
                                         LagPolicy policy = {}) {
    if (y.size() != x.size()) {
        throw std::invalid_argument("engle_granger: series lengths differ");
    }
    const int n = static_cast<int>(y.size());
    Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
    Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
    const Eigen::MatrixXd X = build_design(n, true, true, {xv});
    const OLSResult step1 = ols(X, yv);

    CointegrationResult r;
    const double y_ss = (yv.array() - yv.mean()).square().sum();
    if (step1.sse <= 1e-12 * std::max(y_ss, 1.0)) {
        // Exact linear relation: residual series carries no information, but
        // the relation itself is a (degenerate) cointegrating one.
        r.degenerate = true;
        r.eg_statistic = -std::numeric_limits<double>::infinity();
        r.eg_p_value = 0.0;
        r.cointegrated_1pct = r.cointegrated_5pct = r.cointegrated_10pct = true;
        r.note = "degenerate: step-1 residuals numerically zero";
        return r;
    }

    std::vector<double> resid(step1.residuals.data(), step1.residuals.data() + n);
    const ADFResult step2 = adf_test(resid, Deterministics::none, policy);
    r.eg_statistic = step2.statistic;
    r.eg_p_value = mackinnon_p(step2.statistic, Deterministics::constant_trend, 2);
    r.cointegrated_1pct = *r.eg_p_value < 0.01;
    r.cointegrated_5pct = *r.eg_p_value < 0.05;
    r.cointegrated_10pct = *r.eg_p_value < 0.10;
    return r;
}

inline CointegrationResult engle_granger(const PriceSeries& y, const PriceSeries& x,
                                         LagPolicy policy = {}) {
    if (y.start() != x.start() || y.size() != x.size()) {
        throw std::invalid_argument("engle_granger: series spans differ");
    }
    return engle_granger(y.values(), x.values(), policy);
}

// Decision tree for a fundamental bubble: a price that is itself stationary
// self-corrects (no bubble); a stationary fundamental under a nonstationary
// price is a bubble outright; otherwise the two are compared via the
// cointegration test and a bubble is the absence of a long-run link.
inline CointegrationResult fundamental_bubble_test(const std::vector<double>& price,
                                                   const std::vector<double>& fundamental,
                                                   double level = 0.05,
                                                   LagPolicy policy = {}) {
    if (price.size() != fundamental.size()) {
        throw std::invalid_argument("fundamental_bubble_test: series lengths differ");
    }
    CointegrationResult r;
    r.y_order = integration_order(price, level);
    if (*r.y_order == 0) {
        r.bubble_flag = false;
        r.note = "price is stationary (self-correcting); cointegration test not applicable";
        return r;
    }
    r.x_order = integration_order(fundamental, level);
    if (*r.x_order == 0) {
        r.bubble_flag = true;
        r.note = "fundamental is stationary while price is not";
        return r;
    }
    CointegrationResult eg = engle_granger(price, fundamental, policy);
    eg.y_order = r.y_order;
    eg.x_order = r.x_order;
    eg.bubble_flag = !eg.cointegrated_at(level);
    return eg;
}

inline CointegrationResult fundamental_bubble_test(const PriceSeries& price,
                                                   const PriceSeries& fundamental,
                                                   double level = 0.05,
                                                   LagPolicy policy = {}) {
    if (price.start() != fundamental.start() || price.size() != fundamental.size()) {
        throw std::invalid_argument("fundamental_bubble_test: series spans differ");
    }
    return fundamental_bubble_test(price.values(), fundamental.values(), level, policy);
}

}  // namespace bubblescope
