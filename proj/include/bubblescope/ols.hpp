#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "bubblescope/common.hpp"

namespace bubblescope {

struct OLSResult {
    Eigen::VectorXd coef;        // in design-column order
    Eigen::VectorXd residuals;   // y - X*coef
    double sse = 0.0;
    Eigen::VectorXd std_errors;  // sqrt(sigma2 * (X'X)^-1 diagonal)
    double sigma2 = 0.0;         // sse / (n - k)
    int n = 0;
    int k = 0;

    double tstat(int j) const { return coef(j) / std_errors(j); }
};

// Least squares via column-pivoted QR. Throws numeric_error when the design
// is rank deficient so callers never consume garbage coefficients.
inline OLSResult ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const int n = static_cast<int>(X.rows());
    const int k = static_cast<int>(X.cols());
    if (y.size() != n) throw std::invalid_argument("ols: X rows != y length");
    if (n <= k) {
        throw numeric_error("ols: " + std::to_string(n) + " rows cannot identify " +
                            std::to_string(k) + " coefficients");
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) {
        throw numeric_error("ols: design matrix is rank deficient (rank " +
                            std::to_string(qr.rank()) + " of " + std::to_string(k) + ")");
    }

    OLSResult r;
    r.n = n;
    r.k = k;
    r.coef = qr.solve(y);
    r.residuals = y - X * r.coef;
    r.sse = r.residuals.squaredNorm();
    r.sigma2 = r.sse / static_cast<double>(n - k);

    const Eigen::MatrixXd xtx_inv =
        (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
    r.std_errors = (r.sigma2 * xtx_inv.diagonal()).cwiseMax(0.0).cwiseSqrt();
    return r;
}

// Convenience builder: [intercept | trend 1..n | exog columns].
inline Eigen::MatrixXd build_design(int n, bool intercept, bool trend,
                                    const std::vector<Eigen::VectorXd>& exog = {}) {
    int k = (intercept ? 1 : 0) + (trend ? 1 : 0) + static_cast<int>(exog.size());
    Eigen::MatrixXd X(n, k);
    int col = 0;
    if (intercept) X.col(col++).setOnes();
    if (trend) {
        for (int i = 0; i < n; ++i) X(i, col) = static_cast<double>(i + 1);
        ++col;
    }
    for (const auto& e : exog) {
        if (e.size() != n) throw std::invalid_argument("exog length mismatch");
        X.col(col++) = e;
    }
    return X;
}

}  // namespace bubblescope
