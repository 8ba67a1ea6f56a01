#pragma once

#include <optional>
#include <span>

namespace preempt::stats {

struct TestResult {
    double statistic = 0.0;
    double df = 0.0;
    double p = 1.0;
    std::optional<double> effect_size;
};

struct GroupSummary {
    double mean = 0.0;
    double sd = 0.0;
    double n = 0.0;
};

GroupSummary summarize(std::span<const double> x);

// A zero standard error with a zero mean difference gives t = 0 and p = 1.
// A zero standard error with a nonzero difference gives an infinite t and
// p = 0. Samples with fewer than two values throw InputError.

TestResult paired_t(std::span<const double> x, std::span<const double> y);

/// Pooled-variance (Student) or unpooled (Welch-Satterthwaite) two-sample t.
/// The effect size is Cohen's d as defined by cohens_d().
TestResult independent_t(std::span<const double> x, std::span<const double> y, bool pooled = true);
TestResult independent_t(const GroupSummary& x, const GroupSummary& y, bool pooled = true);

/// One-sample t of x against mu.
TestResult one_sample_t(std::span<const double> x, double mu = 0.0);

/// (mean1 - mean2) / sqrt((sd1^2 + sd2^2) / 2). The equal-weight pooled SD
/// ignores the group sizes, which only need to be at least 2. Throws
/// DegenerateError when both SDs are zero.
double cohens_d(double mean1, double sd1, double n1, double mean2, double sd2, double n2);
double cohens_d(std::span<const double> x, std::span<const double> y);

}  // namespace preempt::stats
