#pragma once

#include <span>
#include <vector>

namespace preempt::stats {

struct FdrResult {
    std::vector<bool> rejected;
    std::vector<double> adjusted;  // BH-adjusted p, same order as the input
};

/// Benjamini-Hochberg step-up at level q. Throws InputError for p outside [0, 1].
FdrResult bh_fdr(std::span<const double> pvals, double q = 0.05);

}  // namespace preempt::stats
