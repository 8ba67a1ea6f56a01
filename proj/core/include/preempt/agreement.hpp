#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "preempt/stimulus.hpp"

namespace preempt {

/// Three-way annotation label used for pipeline validation.
enum class GoldLabel { Conv, Unconv, Reject };

std::string_view to_string(GoldLabel l);
GoldLabel parse_gold_label(std::string_view s);  // throws InputError

struct LabeledSentence {
    std::string key;
    Construction construction = Construction::Dative;
    GoldLabel label = GoldLabel::Reject;
};

struct PrecisionStat {
    std::size_t predicted = 0;  // non-reject predictions
    std::size_t correct = 0;
    double precision() const { return predicted ? static_cast<double>(correct) / static_cast<double>(predicted) : 0.0; }
};

struct GoldValidation {
    std::map<Construction, PrecisionStat> per_construction;
    PrecisionStat overall;
    double kappa = 0.0;
    std::size_t n = 0;
};

/// Cohen's kappa for two raters over labels 0..k-1.
/// Returns 1 when both raters use a single identical label throughout.
double cohen_kappa(std::span<const int> a, std::span<const int> b, int k);

/// Precision among non-reject predictions and 3-way kappa. Both sides must
/// carry the same set of sentence keys (InputError otherwise).
GoldValidation validate_against_gold(const std::vector<LabeledSentence>& predictions,
                                     const std::vector<LabeledSentence>& gold);

}  // namespace preempt
