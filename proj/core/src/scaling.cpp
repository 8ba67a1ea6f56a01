#include "preempt/scaling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <random>

#include <Eigen/Dense>

#include "preempt/error.hpp"
#include "preempt/stats/descriptive.hpp"
#include "preempt/text.hpp"

namespace preempt {

std::string_view to_string(ScalingForm f) {
    switch (f) {
        case ScalingForm::PowerLaw3: return "PowerLaw3";
        case ScalingForm::LogLinear: return "LogLinear";
        case ScalingForm::PowerLaw2: return "PowerLaw2";
    }
    return "?";
}

double ScalingFit::predict(double n_params) const {
    switch (form) {
        case ScalingForm::LogLinear: return a * std::log(n_params) + c;
        case ScalingForm::PowerLaw2: return a * std::pow(n_params, b);
        case ScalingForm::PowerLaw3: break;
    }
    return a * std::pow(n_params, b) + c;
}

namespace {

// Points rescaled by the geometric mean of N, so that x^b stays O(1)
// across the whole grid of exponents.
struct Scaled {
    std::vector<double> x;
    std::vector<double> y;
    double ref = 1.0;
};

Scaled rescale(const std::vector<ScalingPoint>& points, std::size_t min_points, const char* what) {
    if (points.size() < min_points) {
        throw InputError(std::string(what) + ": needs at least " + std::to_string(min_points) + " points");
    }
    double log_sum = 0.0;
    for (const auto& p : points) {
        if (!(p.n_params > 0.0) || !std::isfinite(p.n_params)) {
            throw InputError(std::string(what) + ": parameter counts must be positive and finite");
        }
        if (!std::isfinite(p.r)) throw InputError(std::string(what) + ": non-finite r");
        log_sum += std::log(p.n_params);
    }
    const bool all_same = std::all_of(points.begin(), points.end(),
                                      [&](const ScalingPoint& p) { return p.n_params == points.front().n_params; });
    if (all_same) throw InputError(std::string(what) + ": all parameter counts are identical");
    Scaled s;
    s.ref = std::exp(log_sum / static_cast<double>(points.size()));
    for (const auto& p : points) {
        s.x.push_back(p.n_params / s.ref);
        s.y.push_back(p.r);
    }
    return s;
}

void finish(ScalingFit& f, const std::vector<ScalingPoint>& points) {
    const auto n = static_cast<double>(points.size());
    std::vector<double> y;
    for (const auto& p : points) y.push_back(p.r);
    const double ybar = stats::mean(y);
    double rss = 0.0, tss = 0.0;
    for (const auto& p : points) {
        const double e = p.r - f.predict(p.n_params);
        rss += e * e;
        tss += (p.r - ybar) * (p.r - ybar);
    }
    f.n = points.size();
    f.rss = rss;
    f.r2 = tss > 0.0 ? 1.0 - rss / tss : 0.0;
    f.adj_r2 = n > f.k ? 1.0 - (1.0 - f.r2) * (n - 1.0) / (n - f.k) : std::nan("");
    const double ll = rss > 0.0 ? n * std::log(rss / n) : -std::numeric_limits<double>::infinity();
    f.aic = ll + 2.0 * f.k;
    f.bic = ll + f.k * std::log(n);
}

struct LmResult {
    double a = 0.0, b = 0.0, c = 0.0;
    double rss = std::numeric_limits<double>::infinity();
    bool converged = false;
};

// Linear least squares for (a, c) in y = a x^b + c (or y = a x^b).
std::pair<double, double> linear_part(const Scaled& s, double b, bool with_c) {
    double sxx = 0.0, sx = 0.0, sy = 0.0, sxy = 0.0;
    const auto n = static_cast<double>(s.x.size());
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double u = std::pow(s.x[i], b);
        sxx += u * u;
        sx += u;
        sy += s.y[i];
        sxy += u * s.y[i];
    }
    if (!with_c) return {sxx > 0.0 ? sxy / sxx : 0.0, 0.0};
    const double det = n * sxx - sx * sx;
    if (std::fabs(det) < 1e-300) return {0.0, sy / n};
    return {(n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det};
}

double rss_of(const Scaled& s, double a, double b, double c) {
    double rss = 0.0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double e = s.y[i] - (a * std::pow(s.x[i], b) + c);
        rss += e * e;
    }
    return rss;
}

LmResult levenberg_marquardt(const Scaled& s, double b0, bool with_c) {
    const auto [a0, c0] = linear_part(s, b0, with_c);
    const int np = with_c ? 3 : 2;
    Eigen::Vector3d theta(a0, b0, c0);
    double rss = rss_of(s, a0, b0, c0);
    double lambda = 1e-3;
    LmResult out;
    const auto m = static_cast<Eigen::Index>(s.x.size());
    for (int iter = 0; iter < 300; ++iter) {
        Eigen::MatrixXd J(m, np);
        Eigen::VectorXd r(m);
        for (Eigen::Index i = 0; i < m; ++i) {
            const double xi = s.x[static_cast<std::size_t>(i)];
            const double u = std::pow(xi, theta(1));
            r(i) = s.y[static_cast<std::size_t>(i)] - (theta(0) * u + theta(2));
            J(i, 0) = u;
            J(i, 1) = theta(0) * u * std::log(xi);
            if (with_c) J(i, 2) = 1.0;
        }
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd Jtr = J.transpose() * r;
        if (Jtr.norm() <= 1e-15 * (1.0 + rss)) {
            out.converged = true;
            break;
        }
        bool improved = false;
        for (int tries = 0; tries < 40; ++tries) {
            Eigen::MatrixXd A = JtJ;
            for (int k = 0; k < np; ++k) A(k, k) += lambda * std::max(JtJ(k, k), 1e-12);
            const Eigen::VectorXd step = A.ldlt().solve(Jtr);
            Eigen::Vector3d cand = theta;
            for (int k = 0; k < np; ++k) cand(k) += step(k);
            const double cand_rss = rss_of(s, cand(0), cand(1), cand(2));
            if (std::isfinite(cand_rss) && cand_rss <= rss) {
                const double rel_step = step.norm() / (theta.head(np).norm() + 1e-12);
                const double drop = rss - cand_rss;
                theta = cand;
                rss = cand_rss;
                lambda = std::max(lambda / 10.0, 1e-15);
                improved = true;
                if (rel_step < 1e-13 || drop <= 1e-16 * rss) out.converged = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!improved) {
            // no descent direction left at any damping: a stationary point
            out.converged = true;
            break;
        }
        if (out.converged) break;
    }
    // with b fixed the remaining parameters are linear; solve them exactly
    const auto [a, c] = linear_part(s, theta(1), with_c);
    out.a = a;
    out.b = theta(1);
    out.c = c;
    out.rss = rss_of(s, a, theta(1), c);
    if (!(out.rss <= rss)) {
        out.a = theta(0);
        out.c = theta(2);
        out.rss = rss;
    }
    return out;
}

LmResult multistart(const Scaled& s, bool with_c, std::size_t grid, std::optional<double> warm = std::nullopt) {
    LmResult best;
    if (warm) best = levenberg_marquardt(s, *warm, with_c);
    const std::size_t g = std::max<std::size_t>(grid, 2);
    const double lo = std::log(0.005);
    const double hi = std::log(1.0);
    for (std::size_t i = 0; i < g; ++i) {
        const double mag = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(g - 1));
        for (double b0 : {mag, -mag}) {
            const auto r = levenberg_marquardt(s, b0, with_c);
            if (std::isfinite(r.rss) && r.rss < best.rss) best = r;
        }
    }
    return best;
}

ScalingFit power_fit(const std::vector<ScalingPoint>& points, const PowerFitOptions& opts, bool with_c) {
    const char* what = with_c ? "fit_power_law" : "fit_power_noint";
    const auto s = rescale(points, with_c ? 4 : 3, what);
    const auto best = multistart(s, with_c, opts.grid);
    if (!std::isfinite(best.rss)) throw DegenerateError(std::string(what) + ": no finite fit found");
    ScalingFit f;
    f.form = with_c ? ScalingForm::PowerLaw3 : ScalingForm::PowerLaw2;
    f.k = with_c ? 3 : 2;
    f.b = best.b;
    f.a = best.a * std::pow(s.ref, -best.b);
    f.c = best.c;
    f.converged = best.converged;
    finish(f, points);

    if (opts.bootstrap > 0) {
        std::vector<double> fitted, resid;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            fitted.push_back(best.a * std::pow(s.x[i], best.b) + best.c);
            resid.push_back(s.y[i] - fitted.back());
        }
        std::mt19937_64 rng(opts.seed);
        std::uniform_int_distribution<std::size_t> pick(0, resid.size() - 1);
        std::vector<double> bs;
        bs.reserve(opts.bootstrap);
        Scaled boot = s;
        for (std::size_t rep = 0; rep < opts.bootstrap; ++rep) {
            for (std::size_t i = 0; i < boot.y.size(); ++i) boot.y[i] = fitted[i] + resid[pick(rng)];
            // warm start at the point estimate plus a coarse grid
            const auto r = multistart(boot, with_c, std::min<std::size_t>(opts.grid, 4), best.b);
            if (std::isfinite(r.rss)) bs.push_back(r.b);
        }
        if (!bs.empty()) {
            std::sort(bs.begin(), bs.end());
            const double alpha = (1.0 - opts.level) / 2.0;
            f.b_ci = std::make_pair(stats::quantile_sorted(bs, alpha), stats::quantile_sorted(bs, 1.0 - alpha));
        }
    }
    return f;
}

}  // namespace

ScalingFit fit_power_law(const std::vector<ScalingPoint>& points, const PowerFitOptions& opts) {
    return power_fit(points, opts, true);
}

ScalingFit fit_power_noint(const std::vector<ScalingPoint>& points, const PowerFitOptions& opts) {
    return power_fit(points, opts, false);
}

ScalingFit fit_loglinear(const std::vector<ScalingPoint>& points) {
    const auto s = rescale(points, 3, "fit_loglinear");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& p : points) {
        const double l = std::log(p.n_params);
        sx += l;
        sy += p.r;
        sxx += l * l;
        sxy += l * p.r;
    }
    const auto n = static_cast<double>(points.size());
    const double det = n * sxx - sx * sx;
    ScalingFit f;
    f.form = ScalingForm::LogLinear;
    f.k = 2;
    f.a = (n * sxy - sx * sy) / det;
    f.c = (sy - f.a * sx) / n;
    finish(f, points);
    return f;
}

std::vector<ScalingFit> model_comparison(const std::vector<ScalingPoint>& points) {
    if (points.size() < 4) throw InputError("model_comparison: needs at least 4 points");
    PowerFitOptions opts;
    opts.bootstrap = 0;
    std::vector<ScalingFit> fits{fit_power_law(points, opts), fit_loglinear(points), fit_power_noint(points, opts)};
    std::stable_sort(fits.begin(), fits.end(), [](const ScalingFit& x, const ScalingFit& y) { return x.aic < y.aic; });
    return fits;
}

JackknifeResult jackknife_loo(const std::vector<ScalingPoint>& points) {
    if (points.size() < 5) throw InputError("jackknife_loo: needs at least 5 points");
    PowerFitOptions opts;
    opts.bootstrap = 0;
    JackknifeResult j;
    for (std::size_t i = 0; i < points.size(); ++i) {
        auto rest = points;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
        j.b.push_back(fit_power_law(rest, opts).b);
    }
    j.mean = stats::mean(j.b);
    j.sd = stats::sd(j.b);
    return j;
}

std::vector<ScalingPoint> read_scaling_csv(std::istream& in, const std::string& source) {
    std::vector<ScalingPoint> out;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = text::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto cols = text::split(t, ',');
        if (!header) {
            if (cols.size() != 2 || text::trim(cols[0]) != "n_params" || text::trim(cols[1]) != "r") {
                throw ParseError(source, lineno, "expected header 'n_params,r'");
            }
            header = true;
            continue;
        }
        if (cols.size() != 2) throw ParseError(source, lineno, "expected 2 columns");
        ScalingPoint p;
        try {
            std::size_t used = 0;
            const std::string a(text::trim(cols[0]));
            const std::string b(text::trim(cols[1]));
            p.n_params = std::stod(a, &used);
            if (used != a.size()) throw std::invalid_argument(a);
            p.r = std::stod(b, &used);
            if (used != b.size()) throw std::invalid_argument(b);
        } catch (const std::exception&) {
            throw ParseError(source, lineno, "non-numeric value");
        }
        if (!(p.n_params > 0.0)) throw ParseError(source, lineno, "n_params must be positive");
        if (p.r < -1.0 || p.r > 1.0) throw ParseError(source, lineno, "r must lie in [-1, 1]");
        out.push_back(p);
    }
    if (!header) throw ParseError(source, lineno, "missing header 'n_params,r'");
    return out;
}

std::vector<ScalingPoint> load_scaling_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open scaling CSV: " + path);
    return read_scaling_csv(in, path);
}

}  // namespace preempt
