#include "preempt/stats/mixed_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

#include <Eigen/Dense>

#include "preempt/error.hpp"
#include "preempt/stats/distributions.hpp"

namespace preempt::stats {

namespace {

constexpr int kP = 4;
using Mat4 = Eigen::Matrix<double, kP, kP>;
using Vec4 = Eigen::Matrix<double, kP, 1>;
using Mat42 = Eigen::Matrix<double, kP, 2>;

// Sufficient statistics of one group for H = I + Z D Z', Z = [1, preempt].
struct GroupStats {
    Mat4 xtx = Mat4::Zero();
    Mat42 xtz = Mat42::Zero();
    Eigen::Matrix2d ztz = Eigen::Matrix2d::Zero();
    Vec4 xty = Vec4::Zero();
    Eigen::Vector2d zty = Eigen::Vector2d::Zero();
    double yty = 0.0;
};

struct Problem {
    std::vector<GroupStats> groups;
    std::size_t n = 0;
    Mat4 xtx = Mat4::Zero();
    double mean_z2 = 0.0;
    std::vector<Vec4> x_rows;
};

Problem prepare(std::span<const MixedRow> rows) {
    std::map<std::string, std::vector<const MixedRow*>> by_group;
    for (const auto& r : rows) {
        if (!std::isfinite(r.delta_s) || !std::isfinite(r.preempt) || !std::isfinite(r.entrench)) {
            throw InputError("mixed_model_fit: non-finite value in row for model '" + r.model_id + "'");
        }
        by_group[r.model_id].push_back(&r);
    }
    if (by_group.size() < 2) throw InputError("mixed_model_fit: needs at least 2 grouping levels");
    Problem pb;
    for (const auto& [id, members] : by_group) {
        if (members.size() < 3) throw InputError("mixed_model_fit: grouping level '" + id + "' has fewer than 3 rows");
        GroupStats g;
        for (const auto* r : members) {
            const Vec4 x(1.0, r->preempt, r->entrench, r->preempt * r->entrench);
            const Eigen::Vector2d z(1.0, r->preempt);
            g.xtx += x * x.transpose();
            g.xtz += x * z.transpose();
            g.ztz += z * z.transpose();
            g.xty += x * r->delta_s;
            g.zty += z * r->delta_s;
            g.yty += r->delta_s * r->delta_s;
            pb.mean_z2 += r->preempt * r->preempt;
            pb.x_rows.push_back(x);
        }
        pb.xtx += g.xtx;
        pb.groups.push_back(g);
        pb.n += members.size();
    }
    if (pb.n <= static_cast<std::size_t>(kP)) throw InputError("mixed_model_fit: needs more rows than fixed effects");
    pb.mean_z2 /= static_cast<double>(pb.n);
    Eigen::FullPivLU<Mat4> lu(pb.xtx);
    lu.setThreshold(1e-12);
    if (lu.rank() < kP) throw DegenerateError("mixed_model_fit: fixed-effect design is rank deficient");
    return pb;
}

struct Evaluation {
    double loglik = -std::numeric_limits<double>::infinity();
    Vec4 beta = Vec4::Zero();
    Mat4 xhx = Mat4::Zero();
    double sigma2 = 0.0;
};

Evaluation evaluate(const Problem& pb, double t1, double t2) {
    Mat4 xhx = Mat4::Zero();
    Vec4 xhy = Vec4::Zero();
    double yhy = 0.0;
    double logdet_h = 0.0;
    const Eigen::Matrix2d D = Eigen::Vector2d(t1, t2).asDiagonal();
    for (const auto& g : pb.groups) {
        // H^-1 = I - Z (I + D Z'Z)^-1 D Z'
        const Eigen::Matrix2d M = Eigen::Matrix2d::Identity() + D * g.ztz;
        const Eigen::Matrix2d K = M.inverse() * D;
        xhx += g.xtx - g.xtz * K * g.xtz.transpose();
        xhy += g.xty - g.xtz * K * g.zty;
        yhy += g.yty - g.zty.dot(K * g.zty);
        logdet_h += std::log(M.determinant());
    }
    Evaluation e;
    const Eigen::LDLT<Mat4> ldlt(xhx);
    if (ldlt.info() != Eigen::Success) return e;
    e.beta = ldlt.solve(xhy);
    e.xhx = xhx;
    const double df = static_cast<double>(pb.n - kP);
    const double quad = std::max(yhy - e.beta.dot(xhy), 0.0);
    e.sigma2 = quad / df;
    if (!(e.sigma2 > 0.0)) {
        // exact fit: the likelihood is unbounded, report the point as best possible
        e.loglik = std::numeric_limits<double>::infinity();
        return e;
    }
    const double logdet_xhx = ldlt.vectorD().array().log().sum();
    e.loglik = -0.5 * (df * (1.0 + std::log(2.0 * std::numbers::pi * e.sigma2)) + logdet_h + logdet_xhx);
    return e;
}

struct SimplexResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Minimises f from `start` with initial step `step` per coordinate.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> start,
                          double step, int max_iter, double tol) {
    const auto dim = start.size();
    std::vector<std::vector<double>> pts(dim + 1, start);
    for (std::size_t i = 0; i < dim; ++i) pts[i + 1][i] += step;
    std::vector<double> fv(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) fv[i] = f(pts[i]);

    SimplexResult res;
    std::vector<std::size_t> idx(dim + 1);
    for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
        for (std::size_t i = 0; i <= dim; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const auto best = idx.front();
        const auto worst = idx.back();
        const auto second = idx[dim - 1];

        double size = 0.0;
        for (std::size_t i = 0; i <= dim; ++i) {
            for (std::size_t k = 0; k < dim; ++k) size = std::max(size, std::fabs(pts[i][k] - pts[best][k]));
        }
        if (std::fabs(fv[worst] - fv[best]) <= tol * (1.0 + std::fabs(fv[best])) && size <= 1e-7) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += pts[i][k] / static_cast<double>(dim);
        }
        const auto along = [&](double c) {
            std::vector<double> p(dim);
            for (std::size_t k = 0; k < dim; ++k) p[k] = centroid[k] + c * (pts[worst][k] - centroid[k]);
            return p;
        };
        const auto xr = along(-1.0);
        const double fr = f(xr);
        if (fr < fv[best]) {
            const auto xe = along(-2.0);
            const double fe = f(xe);
            if (fe < fr) {
                pts[worst] = xe;
                fv[worst] = fe;
            } else {
                pts[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            pts[worst] = xr;
            fv[worst] = fr;
            continue;
        }
        const bool outside = fr < fv[worst];
        const auto xc = along(outside ? -0.5 : 0.5);
        const double fc = f(xc);
        if (fc < (outside ? fr : fv[worst])) {
            pts[worst] = xc;
            fv[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) continue;
            for (std::size_t k = 0; k < dim; ++k) pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
            fv[i] = f(pts[i]);
        }
    }
    const auto best = static_cast<std::size_t>(std::min_element(fv.begin(), fv.end()) - fv.begin());
    res.x = pts[best];
    res.f = fv[best];
    return res;
}

}  // namespace

double reml_loglik(std::span<const MixedRow> rows, double ratio_intercept, double ratio_slope) {
    if (ratio_intercept < 0.0 || ratio_slope < 0.0) throw InputError("reml_loglik: variance ratios must be >= 0");
    return evaluate(prepare(rows), ratio_intercept, ratio_slope).loglik;
}

RegressionFit mixed_model_fit(std::span<const MixedRow> rows, const MixedModelOptions& opts) {
    const auto pb = prepare(rows);
    const auto negll = [&](double t1, double t2) {
        const double ll = evaluate(pb, t1, t2).loglik;
        return std::isnan(ll) ? std::numeric_limits<double>::infinity() : -ll;
    };

    // interior search on s with theta = s^2
    auto main = nelder_mead([&](const std::vector<double>& s) { return negll(s[0] * s[0], s[1] * s[1]); },
                            {0.5, 0.5}, 0.25, opts.max_iterations, opts.tolerance);
    std::array<double, 2> theta{main.x[0] * main.x[0], main.x[1] * main.x[1]};
    double best = main.f;
    int iterations = main.iterations;
    bool converged = main.converged;

    const auto consider = [&](double t1, double t2, double f) {
        if (f <= best) {
            best = f;
            theta = {t1, t2};
        }
    };
    consider(0.0, 0.0, negll(0.0, 0.0));
    const auto intercept_only =
        nelder_mead([&](const std::vector<double>& s) { return negll(s[0] * s[0], 0.0); }, {0.5}, 0.25,
                    opts.max_iterations, opts.tolerance);
    consider(intercept_only.x[0] * intercept_only.x[0], 0.0, intercept_only.f);
    const auto slope_only =
        nelder_mead([&](const std::vector<double>& s) { return negll(0.0, s[0] * s[0]); }, {0.5}, 0.25,
                    opts.max_iterations, opts.tolerance);
    consider(0.0, slope_only.x[0] * slope_only.x[0], slope_only.f);
    iterations += intercept_only.iterations + slope_only.iterations;

    const auto e = evaluate(pb, theta[0], theta[1]);
    RegressionFit fit;
    fit.names = {"(Intercept)", "Preempt", "Entrench", "Preempt:Entrench"};
    fit.n = pb.n;
    fit.groups = pb.groups.size();
    fit.df = static_cast<double>(pb.n - kP);
    fit.iterations = iterations;
    fit.converged = converged;
    fit.reml_loglik = e.loglik;
    fit.var_residual = e.sigma2;
    fit.var_intercept = theta[0] * e.sigma2;
    fit.var_slope = theta[1] * e.sigma2;

    const Mat4 cov = e.sigma2 * e.xhx.inverse();
    for (int j = 0; j < kP; ++j) {
        const double b = e.beta(j);
        const double se = std::sqrt(std::max(cov(j, j), 0.0));
        const double t = se > 0.0 ? b / se : (b == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), b));
        fit.beta.push_back(b);
        fit.se.push_back(se);
        fit.t.push_back(t);
        fit.p.push_back(t_two_sided_p(t, fit.df));
    }

    // variance of the fixed-effect predictions (sample variance)
    double sum = 0.0, sum2 = 0.0;
    for (const auto& x : pb.x_rows) {
        const double v = x.dot(e.beta);
        sum += v;
        sum2 += v * v;
    }
    const double nd = static_cast<double>(pb.n);
    const double var_f = std::max((sum2 - sum * sum / nd) / (nd - 1.0), 0.0);
    const double var_random = fit.var_intercept + fit.var_slope * pb.mean_z2;
    const double total = var_f + var_random + fit.var_residual;
    if (total > 0.0) {
        fit.marginal_r2 = var_f / total;
        fit.conditional_r2 = (var_f + var_random) / total;
    }
    return fit;
}

}  // namespace preempt::stats
