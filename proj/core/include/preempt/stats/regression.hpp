#pragma once

#include <string>
#include <vector>

namespace preempt::stats {

/// Ordinary least squares on predictor columns (an intercept column is
/// prepended when `intercept` is true). Coefficient order follows the
/// columns, intercept first.
struct OlsFit {
    std::vector<double> beta;
    std::vector<double> se;
    std::vector<double> t;
    std::vector<double> p;
    std::vector<double> fitted;
    std::vector<double> residuals;
    double rss = 0.0;
    double r2 = 0.0;
    double adj_r2 = 0.0;
    double sigma2 = 0.0;  // rss / df_resid
    double df_resid = 0.0;
};

/// Throws InputError for ragged columns or n <= number of coefficients, and
/// DegenerateError when the design is rank deficient.
OlsFit ols(const std::vector<std::vector<double>>& columns, const std::vector<double>& y, bool intercept = true);

struct VifEntry {
    double value = 1.0;
    bool collinear = false;  // perfect collinearity; value is +infinity
};

/// Variance inflation factor 1 / (1 - R^2_j) of each column regressed on
/// the others (with intercept). Needs at least 2 columns and n > columns.
std::vector<VifEntry> vif(const std::vector<std::vector<double>>& columns);

}  // namespace preempt::stats
