#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bubblescope/common.hpp"

namespace bubblescope {

// Log-periodic power-law parameters for the expected log-price
//   A + B*tau^m + C*tau^m*cos(omega*ln tau - phi),  tau = t_c - t  (months).
struct LPPLSParams {
    double t_c = 0.0;
    double m = 0.0;
    double omega = 0.0;
    double phi = 0.0;
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;

    // A bubble needs a growing envelope that accelerates into the singularity.
    bool bubble_regime() const { return m > 0.0 && m < 1.0 && B < 0.0; }
};

// Crash-hazard parameters: h(t) = alpha*tau^(m-1)*(1 + beta_osc*cos(omega*ln tau - phi_prime)).
struct HazardParams {
    double alpha = 1.0;
    double beta_osc = 0.0;
    double m = 0.5;
    double omega = 8.0;
    double t_c = 0.0;
    double phi_prime = 0.0;
    double kappa = 0.2;  // fractional crash size

    void validate() const {
        if (!(alpha > 0.0)) throw std::invalid_argument("hazard: alpha must be > 0");
        if (!(std::abs(beta_osc) < 1.0)) {
            throw std::invalid_argument("hazard: |beta_osc| must be < 1 to keep h(t) >= 0");
        }
        if (!(m > 0.0 && m < 1.0)) throw std::invalid_argument("hazard: m must be in (0,1)");
        if (!(omega > 0.0)) throw std::invalid_argument("hazard: omega must be > 0");
        // kappa = 0 is the degenerate no-crash limit (zero drift, zero jump).
        if (!(kappa >= 0.0 && kappa <= 1.0)) {
            throw std::invalid_argument("hazard: kappa must be in [0,1]");
        }
    }
};

// Profiled linear coefficients over the basis {1, tau^m, tau^m*cos(omega ln tau),
// tau^m*sin(omega ln tau)}: C1 = C*cos(phi), C2 = C*sin(phi).
struct LinearProfile {
    double A = 0.0;
    double B = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;
    double sse = 0.0;
    bool degenerate = false;  // basis condition number beyond the trust limit

    double C() const { return std::hypot(C1, C2); }
    double phi() const {
        double p = std::atan2(C2, C1);
        if (p < 0.0) p += 2.0 * std::numbers::pi;
        return p;
    }
};

inline double lppls_log_price(double t, const LPPLSParams& p) {
    const double tau = p.t_c - t;
    if (tau < 0.0) throw std::invalid_argument("lppls_log_price: t beyond critical time");
    if (tau == 0.0) {
        if (p.m <= 0.0) {
            throw numeric_error("lppls_log_price: undefined at the singularity for m <= 0");
        }
        return p.A;  // tau^m -> 0 kills both the power and oscillatory terms
    }
    const double pw = std::pow(tau, p.m);
    return p.A + pw * (p.B + p.C * std::cos(p.omega * std::log(tau) - p.phi));
}

inline double hazard_rate(double t, const HazardParams& hp) {
    const double tau = hp.t_c - t;
    if (tau <= 0.0) throw std::invalid_argument("hazard_rate: t must precede critical time");
    return hp.alpha * std::pow(tau, hp.m - 1.0) *
           (1.0 + hp.beta_osc * std::cos(hp.omega * std::log(tau) - hp.phi_prime));
}

// Amplitudes of the expected-log-price form implied by the hazard parameters.
inline std::pair<double, double> coefficient_identities(const HazardParams& hp) {
    if (hp.m == 0.0) throw std::invalid_argument("coefficient_identities: m must be nonzero");
    const double B = -hp.kappa * hp.alpha / hp.m;
    const double C = -hp.kappa * hp.alpha * hp.beta_osc /
                     std::sqrt(hp.m * hp.m + hp.omega * hp.omega);
    return {B, C};
}

namespace detail {

// Basis matrix rows {1, tau^m, tau^m cos(omega ln tau), tau^m sin(omega ln tau)}.
// The grid may touch tau = 0 at the last point; that row is the limit {1,0,0,0}.
inline Eigen::MatrixXd lppls_basis(const std::vector<double>& t_months, double t_c,
                                   double m, double omega) {
    const int n = static_cast<int>(t_months.size());
    Eigen::MatrixXd X(n, 4);
    for (int i = 0; i < n; ++i) {
        const double tau = t_c - t_months[i];
        if (tau < 0.0) {
            throw std::invalid_argument("lppls basis: observation beyond critical time");
        }
        X(i, 0) = 1.0;
        if (tau == 0.0) {
            X(i, 1) = X(i, 2) = X(i, 3) = 0.0;
            continue;
        }
        const double pw = std::pow(tau, m);
        const double ang = omega * std::log(tau);
        X(i, 1) = pw;
        X(i, 2) = pw * std::cos(ang);
        X(i, 3) = pw * std::sin(ang);
    }
    return X;
}

}  // namespace detail

// Profiles out (A, B, C1, C2) for fixed (t_c, m, omega) by linear least
// squares on the four-column basis. An ill-conditioned basis (normal-system
// condition beyond 1e12) is flagged, not thrown: the multistart caller treats
// such points as unusable candidates.
inline LinearProfile profile_linear(const std::vector<double>& t_months,
                                    const std::vector<double>& log_prices,
                                    double t_c, double m, double omega) {
    const int n = static_cast<int>(t_months.size());
    if (n < 5) throw std::invalid_argument("profile_linear: need at least 5 observations");
    if (static_cast<int>(log_prices.size()) != n) {
        throw std::invalid_argument("profile_linear: grid and data lengths differ");
    }

    const Eigen::MatrixXd X = detail::lppls_basis(t_months, t_c, m, omega);
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(log_prices.data(), n);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(3);

    LinearProfile out;
    // cond(X'X) = cond(X)^2, so 1e6 on the basis is the 1e12 normal-system limit.
    out.degenerate = !(smin > 0.0) || smax / smin > 1e6;
    const Eigen::Vector4d beta = svd.solve(y);
    out.A = beta(0);
    out.B = beta(1);
    out.C1 = beta(2);
    out.C2 = beta(3);
    out.sse = (y - X * beta).squaredNorm();
    return out;
}

// Full parameter set from a profiled solve, with the (C, phi) sign ambiguity
// resolved canonically: C >= 0 and phi in [0, 2*pi).
inline LPPLSParams assemble_params(double t_c, double m, double omega,
                                   const LinearProfile& lp) {
    LPPLSParams p;
    p.t_c = t_c;
    p.m = m;
    p.omega = omega;
    p.A = lp.A;
    p.B = lp.B;
    p.C = lp.C();
    p.phi = lp.phi();
    return p;
}

}  // namespace bubblescope
