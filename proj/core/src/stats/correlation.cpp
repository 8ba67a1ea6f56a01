#include "preempt/stats/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "preempt/error.hpp"
#include "preempt/stats/descriptive.hpp"
#include "preempt/stats/distributions.hpp"

namespace preempt::stats {

namespace {

void check_pairs(std::span<const double> x, std::span<const double> y, std::size_t min_n, const char* what) {
    if (x.size() != y.size()) throw InputError(std::string(what) + ": samples differ in length");
    if (x.size() < min_n) {
        throw InputError(std::string(what) + ": needs at least " + std::to_string(min_n) + " observations");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw InputError(std::string(what) + ": non-finite value");
    }
}

// Returns NaN instead of throwing when a variable is constant.
double raw_pearson(std::span<const double> x, std::span<const double> y) {
    const double mx = mean(x);
    const double my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nan("");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> mid_ranks(std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double pearson_r(std::span<const double> x, std::span<const double> y) {
    check_pairs(x, y, 3, "pearson_r");
    const double r = raw_pearson(x, y);
    if (std::isnan(r)) throw DegenerateError("pearson_r: zero variance in one of the variables");
    return r;
}

double spearman_rho(std::span<const double> x, std::span<const double> y) {
    check_pairs(x, y, 3, "spearman_rho");
    const auto rx = mid_ranks(x);
    const auto ry = mid_ranks(y);
    const double r = raw_pearson(rx, ry);
    if (std::isnan(r)) throw DegenerateError("spearman_rho: zero variance in one of the variables");
    return r;
}

double correlation_p(double r, std::size_t n) {
    if (n < 3) throw InputError("correlation_p: needs at least 3 observations");
    if (std::fabs(r) >= 1.0) return 0.0;
    const double df = static_cast<double>(n) - 2.0;
    return t_two_sided_p(r * std::sqrt(df / (1.0 - r * r)), df);
}

CorrelationResult bootstrap_ci(std::span<const double> x, std::span<const double> y, std::size_t resamples,
                               std::uint64_t seed, double level) {
    if (resamples == 0) throw InputError("bootstrap_ci: need at least one resample");
    if (!(level > 0.0 && level < 1.0)) throw InputError("bootstrap_ci: level must lie in (0, 1)");
    CorrelationResult out;
    out.r = pearson_r(x, y);
    out.n = x.size();
    out.p = correlation_p(out.r, out.n);
    out.resamples = resamples;

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
    std::vector<double> bx(x.size()), by(y.size()), rs;
    rs.reserve(resamples);
    for (std::size_t b = 0; b < resamples; ++b) {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const auto j = pick(rng);
            bx[i] = x[j];
            by[i] = y[j];
        }
        const double r = raw_pearson(bx, by);
        if (std::isnan(r)) {
            ++out.degenerate_draws;
            continue;
        }
        rs.push_back(r);
    }
    if (rs.empty()) throw DegenerateError("bootstrap_ci: every resample had zero variance");
    std::sort(rs.begin(), rs.end());
    const double alpha = (1.0 - level) / 2.0;
    out.ci_low = quantile_sorted(rs, alpha);
    out.ci_high = quantile_sorted(rs, 1.0 - alpha);
    return out;
}

double partial_correlation(std::span<const double> x, std::span<const double> y, std::span<const double> z) {
    check_pairs(x, y, 4, "partial_correlation");
    check_pairs(x, z, 4, "partial_correlation");
    const double rxy = pearson_r(x, y);
    const double rxz = pearson_r(x, z);
    const double ryz = pearson_r(y, z);
    const double denom = (1.0 - rxz * rxz) * (1.0 - ryz * ryz);
    if (!(denom > 1e-15)) throw DegenerateError("partial_correlation: control variable is collinear with x or y");
    return std::clamp((rxy - rxz * ryz) / std::sqrt(denom), -1.0, 1.0);
}

}  // namespace preempt::stats
