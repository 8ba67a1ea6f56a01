#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "preempt/error.hpp"
#include "preempt/scaling.hpp"
#include "support.hpp"

using namespace preempt;

namespace {

std::vector<ScalingPoint> pythia_sizes(double a, double b, double c) {
    std::vector<ScalingPoint> pts;
    for (double n : {1.6e8, 4.1e8, 1e9, 2.8e9, 6.9e9, 1.2e10}) pts.push_back({n, a * std::pow(n, b) + c});
    return pts;
}

// For fixed b, a and c are the simple-regression solution of r on N^b.
struct Profile {
    double a, c, rss;
};

Profile profile(const std::vector<ScalingPoint>& pts, double b) {
    double mx = 0, my = 0;
    for (const auto& p : pts) {
        mx += std::pow(p.n_params, b);
        my += p.r;
    }
    mx /= pts.size();
    my /= pts.size();
    double sxy = 0, sxx = 0;
    for (const auto& p : pts) {
        const double x = std::pow(p.n_params, b) - mx;
        sxy += x * (p.r - my);
        sxx += x * x;
    }
    Profile out{sxy / sxx, 0, 0};
    out.c = my - out.a * mx;
    for (const auto& p : pts) {
        const double e = p.r - (out.a * std::pow(p.n_params, b) + out.c);
        out.rss += e * e;
    }
    return out;
}

// Dense scan of the profiled RSS over b, then golden-section refinement.
double profile_argmin(const std::vector<ScalingPoint>& pts, double lo, double hi) {
    double best = lo, best_rss = INFINITY;
    for (int i = 0; i <= 4000; ++i) {
        const double b = lo + (hi - lo) * i / 4000.0;
        if (std::fabs(b) < 1e-6) continue;
        const double r = profile(pts, b).rss;
        if (r < best_rss) {
            best_rss = r;
            best = b;
        }
    }
    double x0 = best - (hi - lo) / 4000.0, x1 = best + (hi - lo) / 4000.0;
    const double g = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 200; ++it) {
        const double m1 = x1 - g * (x1 - x0), m2 = x0 + g * (x1 - x0);
        if (profile(pts, m1).rss < profile(pts, m2).rss) {
            x1 = m2;
        } else {
            x0 = m1;
        }
    }
    return (x0 + x1) / 2;
}

}  // namespace

TEST_CASE("exact power-law data is recovered") {
    PowerFitOptions opts;
    opts.bootstrap = 0;
    for (double b : {0.092, 0.3, -0.2}) {
        const double a = b > 0 ? 0.05 : -4.0;
        const auto pts = pythia_sizes(a, b, 0.1);
        const auto fit = fit_power_law(pts, opts);
        INFO("b = " << b);
        CHECK(fit.b == doctest::Approx(b).epsilon(1e-5));
        CHECK(fit.a == doctest::Approx(a).epsilon(1e-4));
        CHECK(fit.c == doctest::Approx(0.1).epsilon(1e-4));
        CHECK(fit.rss < 1e-12);
        CHECK(fit.k == 3);
        CHECK(fit.form == ScalingForm::PowerLaw3);
    }
}

TEST_CASE("the three-parameter fit reaches the profiled least-squares optimum") {
    const auto pts = load_scaling_csv(testing::data_path("fixtures/table5_scaling.csv"));
    REQUIRE(pts.size() == 6);
    PowerFitOptions opts;
    opts.bootstrap = 0;
    const auto fit = fit_power_law(pts, opts);
    const double b_star = profile_argmin(pts, -1.0, 1.0);
    const auto prof = profile(pts, b_star);
    CHECK(fit.rss <= prof.rss * (1 + 1e-6));
    CHECK(fit.b == doctest::Approx(b_star).epsilon(1e-3));
    CHECK(fit.a == doctest::Approx(prof.a).epsilon(1e-2));
    CHECK(fit.c == doctest::Approx(prof.c).epsilon(1e-3));
    // the printed points saturate, so the optimum has a negative exponent
    CHECK(fit.b < 0.0);
    CHECK(fit.adj_r2 > 0.99);
}

TEST_CASE("goodness-of-fit formulas") {
    const auto pts = load_scaling_csv(testing::data_path("fixtures/table5_scaling.csv"));
    for (const auto& f : model_comparison(pts)) {
        const double n = 6;
        double ybar = 0;
        for (const auto& p : pts) ybar += p.r / n;
        double rss = 0, tss = 0;
        for (const auto& p : pts) {
            rss += std::pow(p.r - f.predict(p.n_params), 2);
            tss += std::pow(p.r - ybar, 2);
        }
        CHECK(f.rss == doctest::Approx(rss).epsilon(1e-12));
        CHECK(f.r2 == doctest::Approx(1 - rss / tss).epsilon(1e-12));
        CHECK(f.adj_r2 == doctest::Approx(1 - (rss / tss) * (n - 1) / (n - f.k)).epsilon(1e-12));
        CHECK(f.aic == doctest::Approx(n * std::log(rss / n) + 2 * f.k).epsilon(1e-12));
        CHECK(f.bic == doctest::Approx(n * std::log(rss / n) + f.k * std::log(n)).epsilon(1e-12));
    }
}

TEST_CASE("model comparison ranks the forms by AIC") {
    const auto pts = load_scaling_csv(testing::data_path("fixtures/table5_scaling.csv"));
    const auto fits = model_comparison(pts);
    REQUIRE(fits.size() == 3);
    CHECK(fits[0].aic <= fits[1].aic);
    CHECK(fits[1].aic <= fits[2].aic);
    CHECK(fits[0].form == ScalingForm::PowerLaw3);
    CHECK(fits[1].form == ScalingForm::LogLinear);
    CHECK(fits[2].form == ScalingForm::PowerLaw2);
    for (const auto& f : fits) CHECK_FALSE(f.b_ci.has_value());
}

TEST_CASE("log-linear fit equals simple regression on ln N") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> z(0, 0.01);
    std::vector<ScalingPoint> pts;
    for (double n = 1e8; n < 2e10; n *= 2.3) pts.push_back({n, 0.04 * std::log(n) - 0.2 + z(rng)});
    double mx = 0, my = 0;
    for (const auto& p : pts) {
        mx += std::log(p.n_params) / pts.size();
        my += p.r / pts.size();
    }
    double sxy = 0, sxx = 0;
    for (const auto& p : pts) {
        sxy += (std::log(p.n_params) - mx) * (p.r - my);
        sxx += std::pow(std::log(p.n_params) - mx, 2);
    }
    const auto fit = fit_loglinear(pts);
    CHECK(fit.a == doctest::Approx(sxy / sxx).epsilon(1e-10));
    CHECK(fit.c == doctest::Approx(my - sxy / sxx * mx).epsilon(1e-10));
    CHECK(fit.k == 2);
}

TEST_CASE("two-parameter power law recovers exact data") {
    PowerFitOptions opts;
    opts.bootstrap = 0;
    const auto fit = fit_power_noint(pythia_sizes(0.1, 0.07, 0.0), opts);
    CHECK(fit.b == doctest::Approx(0.07).epsilon(1e-5));
    CHECK(fit.a == doctest::Approx(0.1).epsilon(1e-4));
    CHECK(fit.c == 0.0);
    CHECK(fit.k == 2);
}

TEST_CASE("bootstrap interval on the exponent") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> z(0, 0.003);
    std::vector<ScalingPoint> pts;
    for (double n = 1e8; n < 3e10; n *= 1.8) pts.push_back({n, 0.05 * std::pow(n, 0.092) + 0.1 + z(rng)});
    PowerFitOptions opts;
    opts.bootstrap = 300;
    opts.seed = 5;
    const auto a = fit_power_law(pts, opts);
    const auto b = fit_power_law(pts, opts);
    REQUIRE(a.b_ci.has_value());
    CHECK(a.b_ci->first == b.b_ci->first);
    CHECK(a.b_ci->second == b.b_ci->second);
    CHECK(a.b_ci->first < a.b);
    CHECK(a.b < a.b_ci->second);
    CHECK(a.b_ci->first < 0.092);
    CHECK(0.092 < a.b_ci->second);
}

TEST_CASE("jackknife refits each leave-one-out subset") {
    const auto pts = load_scaling_csv(testing::data_path("fixtures/table5_scaling.csv"));
    const auto jk = jackknife_loo(pts);
    REQUIRE(jk.b.size() == pts.size());
    PowerFitOptions opts;
    opts.bootstrap = 0;
    double sum = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto rest = pts;
        rest.erase(rest.begin() + static_cast<long>(i));
        CHECK(jk.b[i] == doctest::Approx(fit_power_law(rest, opts).b).epsilon(1e-9));
        sum += jk.b[i];
    }
    const double m = sum / pts.size();
    double ss = 0;
    for (double b : jk.b) ss += (b - m) * (b - m);
    CHECK(jk.mean == doctest::Approx(m).epsilon(1e-12));
    CHECK(jk.sd == doctest::Approx(std::sqrt(ss / (pts.size() - 1))).epsilon(1e-12));
}

TEST_CASE("scaling preconditions and CSV errors") {
    auto pts = pythia_sizes(0.05, 0.1, 0.1);
    pts.resize(3);
    CHECK_THROWS_AS(fit_power_law(pts), InputError);
    CHECK_THROWS_AS(model_comparison(pts), InputError);
    auto five = pythia_sizes(0.05, 0.1, 0.1);
    five.resize(4);
    CHECK_THROWS_AS(jackknife_loo(five), InputError);
    std::vector<ScalingPoint> same(5, {1e9, 0.5});
    CHECK_THROWS_AS(fit_loglinear(same), InputError);
    std::vector<ScalingPoint> neg = pythia_sizes(0.05, 0.1, 0.1);
    neg[0].n_params = -1;
    CHECK_THROWS_AS(fit_loglinear(neg), InputError);

    std::istringstream bad_header("params,r\n1e9,0.5\n");
    CHECK_THROWS_AS(read_scaling_csv(bad_header), ParseError);
    std::istringstream bad_value("n_params,r\n1e9,abc\n");
    try {
        read_scaling_csv(bad_value, "x.csv");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    std::istringstream ok("n_params,r\n1e9,0.5\n2e9,0.6\n");
    CHECK(read_scaling_csv(ok).size() == 2);
}
