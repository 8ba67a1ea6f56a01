#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace preempt::stats {

inline double mean(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v;
    return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

/// Sample variance (n - 1 denominator); 0 for fewer than two values.
inline double variance(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

inline double sd(std::span<const double> x) { return std::sqrt(variance(x)); }

/// Type-7 (linear interpolation) quantile of an ascending-sorted sample.
inline double quantile_sorted(std::span<const double> sorted, double prob) {
    if (sorted.empty()) return 0.0;
    const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace preempt::stats
