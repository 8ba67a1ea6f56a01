#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace preempt::stats {

/// Product-moment correlation. Needs n >= 3 finite pairs; throws
/// DegenerateError when either variable has zero variance.
double pearson_r(std::span<const double> x, std::span<const double> y);

/// Pearson r of mid-ranks (ties share their average rank).
double spearman_rho(std::span<const double> x, std::span<const double> y);

/// Two-sided p for H0: rho = 0, from t = r sqrt(n-2) / sqrt(1-r^2).
double correlation_p(double r, std::size_t n);

struct CorrelationResult {
    double r = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t n = 0;
    double p = 1.0;
    std::size_t resamples = 0;       // bootstrap draws requested
    std::size_t degenerate_draws = 0;  // draws skipped for zero variance
};

/// Pearson r with a percentile bootstrap CI from `resamples` paired (x, y)
/// row resamples drawn by a 64-bit Mersenne Twister seeded with `seed`.
/// Resamples in which a variable is constant are skipped.
CorrelationResult bootstrap_ci(std::span<const double> x, std::span<const double> y, std::size_t resamples = 10000,
                               std::uint64_t seed = 42, double level = 0.95);

/// r_xy.z from the three pairwise correlations. Needs n >= 4; throws
/// DegenerateError when z is perfectly correlated with x or y.
double partial_correlation(std::span<const double> x, std::span<const double> y, std::span<const double> z);

}  // namespace preempt::stats
