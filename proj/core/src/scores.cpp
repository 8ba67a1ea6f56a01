#include "preempt/scores.hpp"

#include <algorithm>
#include <array>

#include "preempt/error.hpp"
#include "preempt/miner.hpp"

namespace preempt {

double preempt_score_conditional(std::uint64_t f_conv, std::uint64_t f_total) {
    if (f_total == 0) throw DegenerateError("conditional preemption score undefined for zero total frequency");
    if (f_conv > f_total) throw InputError("conditional preemption score: f_conv exceeds f_total");
    return static_cast<double>(f_conv) / static_cast<double>(f_total);
}

double entrench_score(const FrequencyTable& table, const std::string& lemma) {
    const auto total = table.total(lemma);
    if (total == 0) throw DegenerateError("entrenchment score undefined: '" + lemma + "' has zero frequency");
    return std::log(static_cast<double>(total));
}

std::string_view to_string(CompetingClass c) {
    switch (c) {
        case CompetingClass::PlusCompeting: return "PlusCompeting";
        case CompetingClass::MinusCompeting: return "MinusCompeting";
        case CompetingClass::Indeterminate: return "Indeterminate";
    }
    return "?";
}

CompetingClass competing_from_shares(std::span<const double> shares, const CompetingThresholds& th) {
    double total = 0.0;
    double top = 0.0;
    for (double s : shares) {
        if (s < 0.0) throw InputError("frame shares must be non-negative");
        total += s;
        top = std::max(top, s);
    }
    if (total <= 0.0) throw DegenerateError("competing classification undefined for zero total");
    const double dominant = top / total;
    if (dominant >= th.plus) return CompetingClass::PlusCompeting;
    if (dominant <= th.minus) return CompetingClass::MinusCompeting;
    return CompetingClass::Indeterminate;
}

CompetingClass competing_classification(const FrequencyTable& table, const std::string& lemma, Construction c,
                                        const CompetingThresholds& th) {
    const auto* cell = table.find(lemma, c);
    if (cell == nullptr || cell->classified() == 0) {
        throw DegenerateError("competing classification undefined: '" + lemma + "' has zero frequency");
    }
    const std::array<double, 2> shares{static_cast<double>(cell->f_conv), static_cast<double>(cell->f_unconv)};
    return competing_from_shares(shares, th);
}

}  // namespace preempt
