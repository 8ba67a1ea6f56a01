#pragma once

// Linear mixed model
//   delta_s ~ 1 + preempt + entrench + preempt:entrench
//             + (1 | model_id) + (0 + preempt | model_id)
// with independent random intercepts and random preempt slopes, fitted by
// restricted maximum likelihood. The residual variance is profiled out and
// the two variance ratios are optimised on a square-root scale by a
// Nelder-Mead simplex, then compared against the boundary solutions where
// one or both random-effect variances are zero.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace preempt::stats {

struct MixedRow {
    double delta_s = 0.0;
    double preempt = 0.0;
    double entrench = 0.0;
    std::string model_id;
};

struct RegressionFit {
    std::vector<std::string> names;  // intercept, Preempt, Entrench, Preempt:Entrench
    std::vector<double> beta;
    std::vector<double> se;
    std::vector<double> t;
    std::vector<double> p;
    double df = 0.0;  // residual df used for the t tests: n - 4

    double var_intercept = 0.0;
    double var_slope = 0.0;
    double var_residual = 0.0;
    double marginal_r2 = 0.0;
    double conditional_r2 = 0.0;

    double reml_loglik = 0.0;
    bool converged = false;
    int iterations = 0;
    std::size_t n = 0;
    std::size_t groups = 0;
};

struct MixedModelOptions {
    int max_iterations = 2000;
    double tolerance = 1e-10;
};

/// Throws InputError for fewer than 2 grouping levels, fewer than 3 rows in
/// any level, or non-finite data; DegenerateError when the fixed-effect
/// design is rank deficient. A fit that exhausts its iteration budget comes
/// back with converged = false and the best point found.
RegressionFit mixed_model_fit(std::span<const MixedRow> rows, const MixedModelOptions& opts = {});

/// Profiled REML log-likelihood at variance ratios (intercept, slope)
/// relative to the residual variance. Both ratios must be >= 0.
double reml_loglik(std::span<const MixedRow> rows, double ratio_intercept, double ratio_slope);

}  // namespace preempt::stats
