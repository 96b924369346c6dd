#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "bubblescope/lppls.hpp"
#include "bubblescope/series.hpp"

namespace bubblescope {

struct FitConfig {
    int n_starts = 50;
    // Critical-time search box, in months past the window end: [lo, hi];
    // hi <= lo selects the default upper bound of 0.2 * window length.
    double tc_offset_lo = 0.1;
    double tc_offset_hi = 0.0;
    double m_lo = 0.005;
    double m_hi = 0.995;
    double omega_lo = 1.0;
    double omega_hi = 30.0;
    int max_iterations = 500;
    double grad_tol = 1e-10;
    double step_tol = 1e-12;
    double lambda_init = 1e-3;
    std::uint64_t rng_seed = 0;

    void validate() const {
        if (n_starts < 1) throw std::invalid_argument("fit config: n_starts must be >= 1");
        if (!(m_lo >= 0.0 && m_hi <= 1.0 && m_lo < m_hi)) {
            throw std::invalid_argument("fit config: m bounds must satisfy 0 <= lo < hi <= 1");
        }
        if (!(omega_lo > 0.0 && omega_lo < omega_hi)) {
            throw std::invalid_argument("fit config: omega bounds must satisfy 0 < lo < hi");
        }
        if (!(tc_offset_lo > 0.0)) {
            throw std::invalid_argument("fit config: t_c search must start past the window end");
        }
        if (max_iterations < 1 || !(grad_tol > 0.0) || !(step_tol > 0.0) ||
            !(lambda_init > 0.0)) {
            throw std::invalid_argument("fit config: bad optimizer settings");
        }
    }

    double tc_hi_or_default(double dt_months) const {
        return tc_offset_hi > tc_offset_lo ? tc_offset_hi : 0.2 * dt_months;
    }
};

struct LPPLSFit {
    LPPLSParams params;
    double sse = std::numeric_limits<double>::infinity();
    Window window;
    bool converged = false;
    int n_observations = 0;
    bool condition_flag = false;  // ill-conditioned linear subproblem seen anywhere

    explicit LPPLSFit(Window w) : window(w) {}
};

struct ResidualJacobian {
    Eigen::VectorXd residuals;  // data minus profiled model
    Eigen::MatrixXd jacobian;   // n x 3 sensitivities w.r.t. (t_c, m, omega)
    LinearProfile profile;
};

// Residuals of the profiled model and their exact derivatives w.r.t. the
// nonlinear parameters (Golub-Pereyra variable projection):
//   J_k = -( P_perp D_k beta  +  Q R^{-T} D_k^T r ),
// where X = QR, P_perp = I - Q Q^T, D_k = dX/dtheta_k and beta solves the
// linear subproblem. When the basis is flagged degenerate the Jacobian is
// zeroed; callers must treat the point as unusable.
inline ResidualJacobian residuals_and_jacobian(const std::vector<double>& t_months,
                                               const std::vector<double>& log_prices,
                                               double t_c, double m, double omega) {
    const int n = static_cast<int>(t_months.size());
    if (n < 5) throw std::invalid_argument("residuals_and_jacobian: need at least 5 observations");
    if (log_prices.size() != t_months.size()) {
        throw std::invalid_argument("residuals_and_jacobian: grid and data lengths differ");
    }
    for (double t : t_months) {
        if (!(t_c > t)) {
            throw std::invalid_argument("residuals_and_jacobian: t_c must exceed every observation time");
        }
    }

    ResidualJacobian out;
    out.profile = profile_linear(t_months, log_prices, t_c, m, omega);

    const Eigen::MatrixXd X = detail::lppls_basis(t_months, t_c, m, omega);
    const Eigen::Vector4d beta(out.profile.A, out.profile.B, out.profile.C1, out.profile.C2);
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(log_prices.data(), n);
    out.residuals = y - X * beta;
    out.jacobian = Eigen::MatrixXd::Zero(n, 3);
    if (out.profile.degenerate) return out;

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, 4);
    const Eigen::Matrix4d R = qr.matrixQR().topRows(4).triangularView<Eigen::Upper>();

    // dX/dtheta_k, sharing the per-row trig/power evaluations.
    Eigen::MatrixXd D_tc = Eigen::MatrixXd::Zero(n, 4);
    Eigen::MatrixXd D_m = Eigen::MatrixXd::Zero(n, 4);
    Eigen::MatrixXd D_w = Eigen::MatrixXd::Zero(n, 4);
    for (int i = 0; i < n; ++i) {
        const double tau = t_c - t_months[i];
        const double lt = std::log(tau);
        const double pw = std::pow(tau, m);
        const double pwm1 = std::pow(tau, m - 1.0);
        const double c = std::cos(omega * lt);
        const double s = std::sin(omega * lt);
        D_tc(i, 1) = m * pwm1;
        D_tc(i, 2) = pwm1 * (m * c - omega * s);
        D_tc(i, 3) = pwm1 * (m * s + omega * c);
        D_m(i, 1) = pw * lt;
        D_m(i, 2) = pw * lt * c;
        D_m(i, 3) = pw * lt * s;
        D_w(i, 2) = -pw * s * lt;
        D_w(i, 3) = pw * c * lt;
    }

    const std::array<const Eigen::MatrixXd*, 3> Ds = {&D_tc, &D_m, &D_w};
    for (int k = 0; k < 3; ++k) {
        const Eigen::MatrixXd& D = *Ds[k];
        const Eigen::VectorXd v = D * beta;
        const Eigen::VectorXd p_perp_v = v - Q * (Q.transpose() * v);
        const Eigen::Vector4d w = D.transpose() * out.residuals;
        const Eigen::Vector4d z = R.transpose().triangularView<Eigen::Lower>().solve(w);
        out.jacobian.col(k) = -(p_perp_v + Q * z);
    }
    return out;
}

namespace detail {

inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
    const double inv = 1.0 / static_cast<double>(base);
    double f = inv, x = 0.0;
    while (i != 0) {
        x += static_cast<double>(i % base) * f;
        i /= base;
        f *= inv;
    }
    return x;
}

struct SearchBox {
    std::array<double, 3> lo, hi;  // (t_c offset or absolute, m, omega)

    std::array<double, 3> clamp(std::array<double, 3> v) const {
        for (int j = 0; j < 3; ++j) v[j] = std::min(std::max(v[j], lo[j]), hi[j]);
        return v;
    }
    std::array<double, 3> at(const std::array<double, 3>& u) const {
        return {lo[0] + u[0] * (hi[0] - lo[0]), lo[1] + u[1] * (hi[1] - lo[1]),
                lo[2] + u[2] * (hi[2] - lo[2])};
    }
};

// Deterministic low-discrepancy starts: Halton in bases 2/3/5 under a seeded
// Cranley-Patterson rotation, except the first point which is always the box
// center. Prefixes are nested, so enlarging n_starts can only improve the
// best SSE found.
inline std::vector<std::array<double, 3>> halton_starts(const SearchBox& box, int n_starts,
                                                        std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto unit = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    const std::array<double, 3> shift = {unit(), unit(), unit()};
    constexpr std::array<std::uint64_t, 3> bases = {2, 3, 5};

    std::vector<std::array<double, 3>> out;
    out.reserve(static_cast<std::size_t>(n_starts));
    out.push_back(box.at({0.5, 0.5, 0.5}));
    for (int k = 1; k < n_starts; ++k) {
        std::array<double, 3> u;
        for (int j = 0; j < 3; ++j) {
            double v = radical_inverse(static_cast<std::uint64_t>(k), bases[j]) + shift[j];
            u[j] = v - std::floor(v);
        }
        out.push_back(box.at(u));
    }
    return out;
}

}  // namespace detail

// Exposed for tests and diagnostics: the multistart initial points in
// absolute month coordinates for one window.
inline std::vector<std::array<double, 3>> generate_starts(const FitConfig& cfg,
                                                          const Window& w) {
    cfg.validate();
    const double t2 = static_cast<double>(w.t2.index());
    const double dt = static_cast<double>(w.dt_months());
    detail::SearchBox box{{cfg.tc_offset_lo, cfg.m_lo, cfg.omega_lo},
                          {cfg.tc_hi_or_default(dt), cfg.m_hi, cfg.omega_hi}};
    auto starts = detail::halton_starts(box, cfg.n_starts, cfg.rng_seed);
    for (auto& s : starts) s[0] += t2;
    return starts;
}

namespace detail {

struct Candidate {
    std::array<double, 3> theta{};  // (t_c relative to t2, m, omega)
    double sse = std::numeric_limits<double>::infinity();
    bool converged = false;
    bool usable = false;
};

// Returns true when a beats b under the deterministic ordering: smaller SSE,
// ties (1e-12 relative) broken by smaller t_c then smaller m.
inline bool candidate_better(const Candidate& a, const Candidate& b) {
    if (!a.usable) return false;
    if (!b.usable) return true;
    const double scale = std::max({std::abs(a.sse), std::abs(b.sse), 1e-300});
    if (std::abs(a.sse - b.sse) > 1e-12 * scale) return a.sse < b.sse;
    if (a.theta[0] != b.theta[0]) return a.theta[0] < b.theta[0];
    return a.theta[1] < b.theta[1];
}

}  // namespace detail

// Calibrates the model on an arbitrary (ascending) month grid; the window end
// is taken to be the last grid point. All search arithmetic runs in
// months-past-window-end coordinates so results do not depend on the epoch.
inline LPPLSFit fit_grid(const std::vector<double>& t_months,
                         const std::vector<double>& log_prices, const Window& w,
                         const FitConfig& cfg) {
    cfg.validate();
    const int n = static_cast<int>(t_months.size());
    if (n < kMinWindowObservations) {
        throw std::invalid_argument("fit_grid: fewer observations than the minimum window length");
    }
    if (log_prices.size() != t_months.size()) {
        throw std::invalid_argument("fit_grid: grid and data lengths differ");
    }

    LPPLSFit fit(w);
    fit.n_observations = n;

    const double t2 = t_months.back();
    const double dt = t_months.back() - t_months.front();
    // Relative grid: s_i = t_i - t2 <= 0, exact for integer month indices.
    std::vector<double> s(t_months.size());
    for (std::size_t i = 0; i < t_months.size(); ++i) s[i] = t_months[i] - t2;

    bool all_equal = true;
    for (double v : log_prices) {
        if (v != log_prices.front()) { all_equal = false; break; }
    }
    if (all_equal) {
        // Flat data leaves B and C unidentified; report the degenerate state
        // instead of pretending one of the equivalent optima is meaningful.
        fit.condition_flag = true;
        fit.converged = false;
        const auto lp = profile_linear(s, log_prices, cfg.tc_offset_lo, 0.5,
                                       std::min(8.0, cfg.omega_hi));
        fit.params = assemble_params(t2 + cfg.tc_offset_lo, 0.5, std::min(8.0, cfg.omega_hi), lp);
        fit.sse = lp.sse;
        return fit;
    }

    detail::SearchBox box{{cfg.tc_offset_lo, cfg.m_lo, cfg.omega_lo},
                          {cfg.tc_hi_or_default(dt), cfg.m_hi, cfg.omega_hi}};
    const auto starts = detail::halton_starts(box, cfg.n_starts, cfg.rng_seed);

    detail::Candidate best;
    for (const auto& start : starts) {
        auto theta = box.clamp(start);
        ResidualJacobian rj = residuals_and_jacobian(s, log_prices, theta[0], theta[1], theta[2]);
        if (rj.profile.degenerate) {
            fit.condition_flag = true;
            continue;
        }
        double sse = rj.residuals.squaredNorm();
        double lambda = cfg.lambda_init;
        bool converged = false;

        for (int iter = 0; iter < cfg.max_iterations; ++iter) {
            const Eigen::Vector3d g = rj.jacobian.transpose() * rj.residuals;
            if (g.lpNorm<Eigen::Infinity>() < cfg.grad_tol) {
                converged = true;
                break;
            }
            Eigen::Matrix3d jtj = rj.jacobian.transpose() * rj.jacobian;
            Eigen::Matrix3d damped = jtj;
            for (int d = 0; d < 3; ++d) {
                damped(d, d) += lambda * std::max(jtj(d, d), 1e-32);
            }
            const Eigen::Vector3d delta = damped.ldlt().solve(-g);
            if (!delta.allFinite()) {
                lambda *= 10.0;
                if (lambda > 1e15) break;
                continue;
            }
            const auto theta_new = box.clamp({theta[0] + delta(0), theta[1] + delta(1),
                                              theta[2] + delta(2)});
            double rel_step = 0.0;
            for (int j = 0; j < 3; ++j) {
                rel_step = std::max(rel_step, std::abs(theta_new[j] - theta[j]) /
                                                  std::max(1.0, std::abs(theta[j])));
            }
            if (rel_step < cfg.step_tol) {
                // pinned: the admissible move is below resolution, whether by
                // damping or by the box; nothing left to decide
                converged = true;
                break;
            }
            ResidualJacobian rj_new =
                residuals_and_jacobian(s, log_prices, theta_new[0], theta_new[1], theta_new[2]);
            if (rj_new.profile.degenerate) {
                fit.condition_flag = true;
                lambda *= 10.0;
                if (lambda > 1e15) break;
                continue;
            }
            const double sse_new = rj_new.residuals.squaredNorm();
            if (sse_new < sse) {
                theta = theta_new;
                rj = std::move(rj_new);
                sse = sse_new;
                lambda /= 10.0;
            } else {
                lambda *= 10.0;
                if (lambda > 1e15) break;
            }
        }

        detail::Candidate cand;
        cand.theta = theta;
        cand.sse = sse;
        cand.converged = converged;
        cand.usable = true;
        if (detail::candidate_better(cand, best)) best = cand;
    }

    if (!best.usable) {
        // Every start landed on a degenerate linear subproblem.
        fit.condition_flag = true;
        fit.converged = false;
        return fit;
    }

    // Final report re-profiles at the absolute critical time so the published
    // numbers are exactly reproducible from the published parameters.
    const double tc_abs = t2 + best.theta[0];
    const auto lp = profile_linear(t_months, log_prices, tc_abs, best.theta[1], best.theta[2]);
    fit.params = assemble_params(tc_abs, best.theta[1], best.theta[2], lp);
    fit.sse = lp.sse;
    fit.converged = best.converged;
    fit.condition_flag = fit.condition_flag || lp.degenerate;
    return fit;
}

// Calibrates one window of a price series (log-prices on the integer month grid).
inline LPPLSFit fit_window(const PriceSeries& series, const Window& w, const FitConfig& cfg) {
    const PriceSeries part = slice(series, w);
    return fit_grid(part.month_grid(), part.log_values(), w, cfg);
}

}  // namespace bubblescope
