#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "preempt/error.hpp"
#include "preempt/stats/correlation.hpp"
#include "preempt/stats/descriptive.hpp"
#include "preempt/stats/distributions.hpp"
#include "preempt/stats/tests.hpp"
#include "support.hpp"

using namespace preempt;
using namespace preempt::stats;
using doctest::Approx;

namespace {

double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    const double mx = mean_of(x), my = mean_of(y);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

std::vector<double> midranks(const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double less = 0, equal = 0;
        for (double w : v) {
            less += w < v[i];
            equal += w == v[i];
        }
        r[i] = less + (equal + 1) / 2;
    }
    return r;
}

// residual of y after simple regression on z
std::vector<double> residualize(const std::vector<double>& y, const std::vector<double>& z) {
    const double mz = mean_of(z), my = mean_of(y);
    double szy = 0, szz = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        szy += (z[i] - mz) * (y[i] - my);
        szz += (z[i] - mz) * (z[i] - mz);
    }
    const double b = szy / szz;
    std::vector<double> r(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) r[i] = y[i] - my - b * (z[i] - mz);
    return r;
}

}  // namespace

TEST_CASE("incomplete beta special cases") {
    for (double x : {0.01, 0.2, 0.5, 0.77, 0.99}) {
        CHECK(incomplete_beta(2.5, 1.0, x) == Approx(std::pow(x, 2.5)).epsilon(1e-12));
        CHECK(incomplete_beta(1.0, 3.0, x) == Approx(1.0 - std::pow(1.0 - x, 3.0)).epsilon(1e-12));
        CHECK(incomplete_beta(3.2, 0.7, x) == Approx(1.0 - incomplete_beta(0.7, 3.2, 1.0 - x)).epsilon(1e-12));
    }
    CHECK(incomplete_beta(2, 3, 0.0) == 0.0);
    CHECK(incomplete_beta(2, 3, 1.0) == 1.0);
}

TEST_CASE("t distribution against closed forms") {
    for (double t : {-30.0, -2.5, -0.3, 0.0, 0.7, 1.96, 12.0}) {
        CHECK(t_cdf(t, 1) == Approx(0.5 + std::atan(t) / std::numbers::pi).epsilon(1e-12));
        CHECK(t_cdf(t, 2) == Approx(0.5 + t / (2 * std::sqrt(2 + t * t))).epsilon(1e-12));
        CHECK(t_cdf(t, 1e7) == Approx(normal_cdf(t)).epsilon(1e-6));
    }
    CHECK(t_two_sided_p(0.0, 10) == 1.0);
    CHECK(t_two_sided_p(2.0, 1) == Approx(1.0 - 2.0 * std::atan(2.0) / std::numbers::pi).epsilon(1e-12));
    CHECK(t_two_sided_p(INFINITY, 5) == 0.0);
    CHECK_THROWS_AS(t_two_sided_p(NAN, 5), DegenerateError);
}

TEST_CASE("normal cdf and quantile") {
    for (double z : {-6.0, -1.5, 0.0, 0.4, 2.33}) CHECK(normal_cdf(z) == Approx(0.5 * std::erfc(-z / std::sqrt(2.0))));
    for (double p : {1e-10, 0.001, 0.025, 0.3, 0.5, 0.9, 0.975, 1 - 1e-9}) {
        CHECK(normal_cdf(normal_quantile(p)) == Approx(p).epsilon(1e-12));
    }
    CHECK(normal_quantile(0.975) == Approx(1.959963984540054).epsilon(1e-12));
}

TEST_CASE("t tests against longhand formulas") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> z;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(5 + rng() % 20), y(4 + rng() % 20);
        for (auto& v : x) v = z(rng) + 0.5;
        for (auto& v : y) v = 1.7 * z(rng);
        const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
        const double sp = ((nx - 1) * var_of(x) + (ny - 1) * var_of(y)) / (nx + ny - 2);
        const double t_pooled = (mean_of(x) - mean_of(y)) / std::sqrt(sp * (1 / nx + 1 / ny));
        const auto pooled = independent_t(x, y, true);
        CHECK(pooled.statistic == Approx(t_pooled).epsilon(1e-12));
        CHECK(pooled.df == nx + ny - 2);
        CHECK(pooled.p == Approx(2 * (1 - t_cdf(std::fabs(t_pooled), nx + ny - 2))).epsilon(1e-9));

        const double vx = var_of(x) / nx, vy = var_of(y) / ny;
        const double welch_df = (vx + vy) * (vx + vy) / (vx * vx / (nx - 1) + vy * vy / (ny - 1));
        const auto welch = independent_t(x, y, false);
        CHECK(welch.statistic == Approx((mean_of(x) - mean_of(y)) / std::sqrt(vx + vy)).epsilon(1e-12));
        CHECK(welch.df == Approx(welch_df).epsilon(1e-12));

        std::vector<double> y2(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y2[i] = x[i] * 0.5 + z(rng);
        std::vector<double> diff(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - y2[i];
        const auto paired = paired_t(x, y2);
        CHECK(paired.statistic == Approx(mean_of(diff) / std::sqrt(var_of(diff) / nx)).epsilon(1e-12));
        CHECK(paired.statistic == Approx(one_sample_t(diff).statistic).epsilon(1e-12));
    }
}

TEST_CASE("t tests on degenerate input") {
    const std::vector<double> same{1, 1, 1}, other{2, 2, 2};
    const auto zero = independent_t(same, same);
    CHECK(zero.statistic == 0.0);
    CHECK(zero.p == 1.0);
    const auto inf = independent_t(other, same);
    CHECK(std::isinf(inf.statistic));
    CHECK(inf.p == 0.0);
    const std::vector<double> one{1};
    CHECK_THROWS_AS(independent_t(one, same), InputError);
}

TEST_CASE("Cohen's d on published summary statistics") {
    // strong vs none dative, LLaMA-2 7B
    CHECK(std::fabs(cohens_d(2.41, 0.89, 27, 0.33, 0.51, 27) - 2.87) <= 0.01);
    // +Competing vs -Competing
    CHECK(std::fabs(cohens_d(2.36, 0.84, 20, 0.91, 0.68, 20) - 1.91) <= 0.02);
    const auto t = independent_t(GroupSummary{2.36, 0.84, 20}, GroupSummary{0.91, 0.68, 20});
    CHECK(std::fabs(t.statistic - 6.02) <= 0.1);
    CHECK(t.df == 38);

    const auto x = testing::planted_sample(27, 2.41, 0.89, 1);
    const auto y = testing::planted_sample(27, 0.33, 0.51, 2);
    CHECK(cohens_d(x, y) == Approx(cohens_d(2.41, 0.89, 27, 0.33, 0.51, 27)).epsilon(1e-12));
    const std::vector<double> flat{1, 1, 1};
    CHECK_THROWS_AS(cohens_d(flat, flat), DegenerateError);
}

TEST_CASE("Pearson and Spearman against oracles") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> z;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(10 + rng() % 30), y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = std::round(3 * z(rng));  // ties on purpose
            y[i] = 0.4 * x[i] + z(rng);
        }
        CHECK(pearson_r(x, y) == Approx(pearson_oracle(x, y)).epsilon(1e-12));
        CHECK(spearman_rho(x, y) == Approx(pearson_oracle(midranks(x), midranks(y))).epsilon(1e-12));
        const double r = pearson_r(x, y);
        const double n = static_cast<double>(x.size());
        CHECK(correlation_p(r, x.size()) == Approx(t_two_sided_p(r * std::sqrt((n - 2) / (1 - r * r)), n - 2)));
    }
    const std::vector<double> a{1, 2, 3}, flat{5, 5, 5};
    CHECK_THROWS_AS(pearson_r(a, flat), DegenerateError);
    const std::vector<double> two{1, 2};
    CHECK_THROWS_AS(pearson_r(two, two), InputError);
}

TEST_CASE("partial correlation equals the residual-regression oracle") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> z;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 6 + rng() % 80;
        std::vector<double> x(n), y(n), w(n);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = z(rng);
            x[i] = 0.6 * w[i] + z(rng);
            y[i] = -0.3 * w[i] + 0.5 * x[i] + z(rng);
        }
        const double oracle = pearson_oracle(residualize(x, w), residualize(y, w));
        CHECK(std::fabs(partial_correlation(x, y, w) - oracle) <= 1e-10);
    }
    std::vector<double> x{1, 2, 3, 4, 5}, y{2, 1, 4, 3, 6};
    CHECK_THROWS_AS(partial_correlation(x, y, x), DegenerateError);
}

TEST_CASE("bootstrap CI is seeded and brackets r") {
    std::mt19937_64 rng(4);
    std::normal_distribution<double> z;
    std::vector<double> x(40), y(40);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = z(rng);
        y[i] = 0.5 * x[i] + z(rng);
    }
    const auto a = bootstrap_ci(x, y, 2000, 42);
    const auto b = bootstrap_ci(x, y, 2000, 42);
    const auto c = bootstrap_ci(x, y, 2000, 43);
    CHECK(a.ci_low == b.ci_low);
    CHECK(a.ci_high == b.ci_high);
    CHECK(a.ci_low != c.ci_low);
    CHECK(a.ci_low < a.r);
    CHECK(a.r < a.ci_high);
    CHECK(a.r == Approx(pearson_oracle(x, y)).epsilon(1e-12));
    CHECK(a.n == 40);
    CHECK(a.resamples == 2000);
}

TEST_CASE("bootstrap CI covers the true correlation about 95% of the time") {
    // smaller version of the acceptance run: 200 datasets, 2000 resamples each
    std::mt19937_64 rng(2025);
    std::normal_distribution<double> z;
    const double rho = 0.5;
    int covered = 0;
    const int sims = 200;
    for (int s = 0; s < sims; ++s) {
        std::vector<double> x(80), y(80);
        for (std::size_t i = 0; i < 80; ++i) {
            x[i] = z(rng);
            y[i] = rho * x[i] + std::sqrt(1 - rho * rho) * z(rng);
        }
        const auto ci = bootstrap_ci(x, y, 2000, static_cast<std::uint64_t>(s));
        covered += ci.ci_low <= rho && rho <= ci.ci_high;
    }
    const double coverage = static_cast<double>(covered) / sims;
    // binomial SD at 200 draws is about 1.5pp
    CHECK(coverage >= 0.90);
    CHECK(coverage <= 0.99);
}

TEST_CASE("descriptive helpers") {
    const std::vector<double> v{1, 2, 3, 4};
    CHECK(mean(v) == 2.5);
    CHECK(variance(v) == Approx(5.0 / 3.0));
    std::vector<double> sorted{10, 20, 30, 40, 50};
    CHECK(quantile_sorted(sorted, 0.25) == 20);
    CHECK(quantile_sorted(sorted, 0.1) == Approx(14));
    const auto g = summarize(v);
    CHECK(g.n == 4);
    CHECK(g.sd == Approx(std::sqrt(5.0 / 3.0)));
}
