#pragma once

// Permutation test for an ordering of per-construction effect sizes.
//
// Each item belongs to a construction and to one of two groups ("high",
// "low"). The statistic for construction c is Cohen's d of high versus low
// values within c. Observed constructions are ordered by d, largest first.
// A relabelling reproduces the ordering when, taken in the observed order,
// its d values descend by at least the observed gap at every step. Under
// the null, construction labels are exchangeable within each group, so the
// permutation shuffles construction labels separately among the high items
// and among the low items, keeping every cell size fixed.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace preempt::stats {

struct OrderingItem {
    int construction = 0;  // any integer label
    bool high = false;
    double value = 0.0;
};

struct OrderingTestResult {
    std::vector<int> constructions;   // labels, in observed order (largest d first)
    std::vector<double> observed_d;   // matching the order above
    std::size_t matches = 0;
    std::size_t permutations = 0;
    double p = 1.0;                   // matches / permutations
    bool exact = false;

    /// "< 1/B" style text when no permutation matched, otherwise the p-value.
    std::string p_text() const;
};

/// Cohen's d for one cell pair, with d = 0 when both groups are constant
/// and equal, and +/-infinity when both are constant and differ.
double ordering_effect(std::span<const double> high, std::span<const double> low);

/// Monte Carlo version with `permutations` seeded draws. Throws InputError
/// unless there are at least two constructions, each with at least two high
/// and two low items.
OrderingTestResult permutation_ordering_test(std::span<const OrderingItem> items, std::size_t permutations,
                                             std::uint64_t seed);

/// Exhaustive version over every distinct relabelling. Throws InputError
/// when the count would exceed `limit`.
OrderingTestResult exact_ordering_test(std::span<const OrderingItem> items, std::size_t limit = 5'000'000);

}  // namespace preempt::stats
