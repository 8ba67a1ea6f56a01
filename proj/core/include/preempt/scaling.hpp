#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace preempt {

struct ScalingPoint {
    double n_params = 0.0;
    double r = 0.0;
};

enum class ScalingForm { PowerLaw3, LogLinear, PowerLaw2 };

std::string_view to_string(ScalingForm f);

/// PowerLaw3: r = a N^b + c. LogLinear: r = a ln N + c (b unused).
/// PowerLaw2: r = a N^b (c = 0).
struct ScalingFit {
    ScalingForm form = ScalingForm::PowerLaw3;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    int k = 0;  // number of fitted parameters
    std::size_t n = 0;
    double rss = 0.0;
    double r2 = 0.0;
    double adj_r2 = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    std::optional<std::pair<double, double>> b_ci;
    bool converged = true;

    double predict(double n_params) const;
};

struct PowerFitOptions {
    std::size_t bootstrap = 1000;  // residual-bootstrap resamples for the b CI; 0 disables
    std::uint64_t seed = 42;
    double level = 0.95;
    std::size_t grid = 24;  // multi-start values of b per sign
};

/// Least squares a N^b + c by Levenberg-Marquardt from a log-spaced grid of
/// starting exponents (|b| in [0.005, 1], both signs), with a and c set by
/// linear least squares at each start. Needs >= 4 points and at least two
/// distinct N.
ScalingFit fit_power_law(const std::vector<ScalingPoint>& points, const PowerFitOptions& opts = {});
ScalingFit fit_loglinear(const std::vector<ScalingPoint>& points);
ScalingFit fit_power_noint(const std::vector<ScalingPoint>& points, const PowerFitOptions& opts = {});

/// All three forms, sorted by AIC (best first). Bootstrap CIs are not computed.
std::vector<ScalingFit> model_comparison(const std::vector<ScalingPoint>& points);

struct JackknifeResult {
    std::vector<double> b;  // exponent with point i left out
    double mean = 0.0;
    double sd = 0.0;        // sample SD
};

/// Leave-one-out refits of the 3-parameter power law. Needs >= 5 points.
JackknifeResult jackknife_loo(const std::vector<ScalingPoint>& points);

/// CSV with header `n_params,r`.
std::vector<ScalingPoint> read_scaling_csv(std::istream& in, const std::string& source = "<stream>");
std::vector<ScalingPoint> load_scaling_csv(const std::string& path);

}  // namespace preempt
