#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>

#include "preempt/stimulus.hpp"

namespace preempt {

class FrequencyTable;

/// Laplace-smoothed share of the conventional frame:
/// (f_conv + 1) / (f_conv + f_unconv + 2). Always in (0, 1).
inline double preempt_score(std::uint64_t f_conv, std::uint64_t f_unconv) {
    return (static_cast<double>(f_conv) + 1.0) / (static_cast<double>(f_conv) + static_cast<double>(f_unconv) + 2.0);
}

/// log((f_conv + 1) / (f_unconv + 1)).
inline double preempt_score_logodds(std::uint64_t f_conv, std::uint64_t f_unconv) {
    return std::log((static_cast<double>(f_conv) + 1.0) / (static_cast<double>(f_unconv) + 1.0));
}

/// f_conv / f_total. Throws DegenerateError when f_total is zero and
/// InputError when f_conv exceeds f_total.
double preempt_score_conditional(std::uint64_t f_conv, std::uint64_t f_total);

/// Natural log of the verb's classified frequency summed across
/// constructions. Throws DegenerateError for a zero total.
double entrench_score(const FrequencyTable& table, const std::string& lemma);

enum class CompetingClass { PlusCompeting, MinusCompeting, Indeterminate };

std::string_view to_string(CompetingClass c);

struct CompetingThresholds {
    double plus = 0.60;   // dominant share at or above -> +Competing
    double minus = 0.45;  // dominant share at or below -> -Competing
};

/// Classify from frame shares (need not be normalised; at least one positive).
CompetingClass competing_from_shares(std::span<const double> shares, const CompetingThresholds& th = {});

/// Classify one (lemma, construction) cell of the table by its conv/unconv split.
/// Throws DegenerateError for a zero total.
CompetingClass competing_classification(const FrequencyTable& table, const std::string& lemma, Construction c,
                                        const CompetingThresholds& th = {});

}  // namespace preempt
