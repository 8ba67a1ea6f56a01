#include "preempt/stats/tests.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "preempt/error.hpp"
#include "preempt/stats/descriptive.hpp"
#include "preempt/stats/distributions.hpp"

namespace preempt::stats {

namespace {

void require_n(std::size_t n, const char* what) {
    if (n < 2) throw InputError(std::string(what) + ": each sample needs at least 2 values");
}

TestResult from_difference(double diff, double se, double df) {
    TestResult r;
    r.df = df;
    if (se == 0.0) {
        if (diff == 0.0) {
            r.statistic = 0.0;
            r.p = 1.0;
        } else {
            r.statistic = std::copysign(std::numeric_limits<double>::infinity(), diff);
            r.p = 0.0;
        }
        return r;
    }
    r.statistic = diff / se;
    r.p = t_two_sided_p(r.statistic, df);
    return r;
}

}  // namespace

GroupSummary summarize(std::span<const double> x) {
    return {mean(x), sd(x), static_cast<double>(x.size())};
}

TestResult paired_t(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InputError("paired_t: samples differ in length");
    require_n(x.size(), "paired_t");
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
    const double n = static_cast<double>(d.size());
    const double s = sd(d);
    auto r = from_difference(mean(d), s / std::sqrt(n), n - 1.0);
    if (s > 0.0) r.effect_size = mean(d) / s;
    return r;
}

TestResult independent_t(const GroupSummary& x, const GroupSummary& y, bool pooled) {
    if (x.n < 2 || y.n < 2) throw InputError("independent_t: each sample needs at least 2 values");
    const double diff = x.mean - y.mean;
    const double vx = x.sd * x.sd;
    const double vy = y.sd * y.sd;
    TestResult r;
    if (pooled) {
        const double df = x.n + y.n - 2.0;
        const double sp2 = ((x.n - 1.0) * vx + (y.n - 1.0) * vy) / df;
        r = from_difference(diff, std::sqrt(sp2 * (1.0 / x.n + 1.0 / y.n)), df);
    } else {
        const double ax = vx / x.n;
        const double ay = vy / y.n;
        const double se2 = ax + ay;
        const double df = se2 == 0.0 ? x.n + y.n - 2.0
                                     : se2 * se2 / (ax * ax / (x.n - 1.0) + ay * ay / (y.n - 1.0));
        r = from_difference(diff, std::sqrt(se2), df);
    }
    if (vx + vy > 0.0) r.effect_size = cohens_d(x.mean, x.sd, x.n, y.mean, y.sd, y.n);
    return r;
}

TestResult independent_t(std::span<const double> x, std::span<const double> y, bool pooled) {
    require_n(x.size(), "independent_t");
    require_n(y.size(), "independent_t");
    return independent_t(summarize(x), summarize(y), pooled);
}

TestResult one_sample_t(std::span<const double> x, double mu) {
    require_n(x.size(), "one_sample_t");
    const double n = static_cast<double>(x.size());
    const double s = sd(x);
    auto r = from_difference(mean(x) - mu, s / std::sqrt(n), n - 1.0);
    if (s > 0.0) r.effect_size = (mean(x) - mu) / s;
    return r;
}

double cohens_d(double mean1, double sd1, double n1, double mean2, double sd2, double n2) {
    if (sd1 < 0.0 || sd2 < 0.0) throw InputError("cohens_d: standard deviations must be non-negative");
    if (n1 < 2 || n2 < 2) throw InputError("cohens_d: group sizes must be at least 2");
    const double pooled = std::sqrt((sd1 * sd1 + sd2 * sd2) / 2.0);
    if (pooled == 0.0) throw DegenerateError("cohens_d: both standard deviations are zero");
    return (mean1 - mean2) / pooled;
}

double cohens_d(std::span<const double> x, std::span<const double> y) {
    const auto a = summarize(x);
    const auto b = summarize(y);
    return cohens_d(a.mean, a.sd, a.n, b.mean, b.sd, b.n);
}

}  // namespace preempt::stats
