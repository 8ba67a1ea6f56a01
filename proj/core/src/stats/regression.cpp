#include "preempt/stats/regression.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "preempt/error.hpp"
#include "preempt/stats/distributions.hpp"

namespace preempt::stats {

namespace {

Eigen::MatrixXd design(const std::vector<std::vector<double>>& columns, std::size_t n, bool intercept) {
    const auto p = columns.size() + (intercept ? 1 : 0);
    Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
    Eigen::Index j = 0;
    if (intercept) X.col(j++).setOnes();
    for (const auto& c : columns) {
        if (c.size() != n) throw InputError("regression: columns differ in length");
        for (std::size_t i = 0; i < n; ++i) X(static_cast<Eigen::Index>(i), j) = c[i];
        ++j;
    }
    return X;
}

}  // namespace

OlsFit ols(const std::vector<std::vector<double>>& columns, const std::vector<double>& y, bool intercept) {
    const auto n = y.size();
    const auto X = design(columns, n, intercept);
    const auto p = static_cast<std::size_t>(X.cols());
    if (p == 0) throw InputError("ols: no coefficients to estimate");
    if (n <= p) throw InputError("ols: needs more observations than coefficients");
    const Eigen::Map<const Eigen::VectorXd> Y(y.data(), static_cast<Eigen::Index>(n));

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-12);
    if (qr.rank() < X.cols()) throw DegenerateError("ols: design matrix is rank deficient");
    const Eigen::VectorXd beta = qr.solve(Y);
    const Eigen::VectorXd fitted = X * beta;
    const Eigen::VectorXd resid = Y - fitted;

    OlsFit f;
    f.df_resid = static_cast<double>(n - p);
    f.rss = resid.squaredNorm();
    f.sigma2 = f.rss / f.df_resid;
    const double ybar = Y.mean();
    const double tss = intercept ? (Y.array() - ybar).square().sum() : Y.squaredNorm();
    f.r2 = tss > 0.0 ? 1.0 - f.rss / tss : 0.0;
    const double dfm = static_cast<double>(intercept ? p - 1 : p);
    const double dft = static_cast<double>(intercept ? n - 1 : n);
    f.adj_r2 = 1.0 - (1.0 - f.r2) * dft / (dft - dfm);

    const Eigen::MatrixXd xtx_inv = (X.transpose() * X).inverse();
    for (std::size_t j = 0; j < p; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const double se = std::sqrt(f.sigma2 * xtx_inv(jj, jj));
        f.beta.push_back(beta(jj));
        f.se.push_back(se);
        const double t = se > 0.0 ? beta(jj) / se
                                  : (beta(jj) == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), beta(jj)));
        f.t.push_back(t);
        f.p.push_back(t_two_sided_p(t, f.df_resid));
    }
    f.fitted.assign(fitted.data(), fitted.data() + n);
    f.residuals.assign(resid.data(), resid.data() + n);
    return f;
}

std::vector<VifEntry> vif(const std::vector<std::vector<double>>& columns) {
    if (columns.size() < 2) throw InputError("vif: needs at least 2 columns");
    const auto n = columns.front().size();
    if (n <= columns.size()) throw InputError("vif: needs more rows than columns");
    const auto X = design(columns, n, false);
    std::vector<VifEntry> out;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        Eigen::MatrixXd others(X.rows(), X.cols());
        others.col(0).setOnes();
        for (Eigen::Index k = 0, c = 1; k < X.cols(); ++k) {
            if (k != j) others.col(c++) = X.col(k);
        }
        const Eigen::VectorXd target = X.col(j);
        const double tss = (target.array() - target.mean()).square().sum();
        VifEntry e;
        if (tss <= 0.0) {
            e = {std::numeric_limits<double>::infinity(), true};
        } else {
            // rank-revealing solve, so a collinear set of other columns still
            // gives the least-squares projection
            Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(others);
            qr.setThreshold(1e-12);
            const Eigen::VectorXd resid = target - others * qr.solve(target);
            const double one_minus_r2 = resid.squaredNorm() / tss;
            if (one_minus_r2 <= 1e-12) {
                e = {std::numeric_limits<double>::infinity(), true};
            } else {
                e.value = 1.0 / one_minus_r2;
            }
        }
        out.push_back(e);
    }
    return out;
}

}  // namespace preempt::stats
