#pragma once

namespace preempt::stats {

/// Regularized incomplete beta I_x(a, b), by Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

/// Student t cumulative distribution function.
double t_cdf(double t, double df);

/// Two-sided p-value P(|T| >= |t|) for T ~ t(df). Infinite t gives 0.
double t_two_sided_p(double t, double df);

/// Standard normal CDF and its inverse (Acklam's rational approximation
/// refined by one Halley step).
double normal_cdf(double z);
double normal_quantile(double p);

}  // namespace preempt::stats
