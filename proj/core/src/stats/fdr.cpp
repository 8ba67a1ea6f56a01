#include "preempt/stats/fdr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "preempt/error.hpp"

namespace preempt::stats {

FdrResult bh_fdr(std::span<const double> pvals, double q) {
    if (!(q > 0.0 && q <= 1.0)) throw InputError("bh_fdr: q must lie in (0, 1]");
    for (double p : pvals) {
        if (!(p >= 0.0 && p <= 1.0)) throw InputError("bh_fdr: p-value outside [0, 1]");
    }
    const std::size_t m = pvals.size();
    FdrResult out{std::vector<bool>(m, false), std::vector<double>(m, 1.0)};
    if (m == 0) return out;

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pvals[a] < pvals[b]; });

    const auto md = static_cast<double>(m);
    std::size_t cutoff = 0;  // number of rejections
    for (std::size_t k = m; k >= 1; --k) {
        if (pvals[order[k - 1]] <= static_cast<double>(k) / md * q) {
            cutoff = k;
            break;
        }
    }
    double running = 1.0;
    for (std::size_t k = m; k >= 1; --k) {
        const auto i = order[k - 1];
        running = std::min(running, pvals[i] * md / static_cast<double>(k));
        // p * m / m can round below p
        out.adjusted[i] = std::max(running, pvals[i]);
        out.rejected[i] = k <= cutoff;
    }
    return out;
}

}  // namespace preempt::stats
