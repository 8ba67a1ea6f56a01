#include "preempt/agreement.hpp"

#include <unordered_map>

#include "preempt/error.hpp"
#include "preempt/text.hpp"

namespace preempt {

std::string_view to_string(GoldLabel l) {
    switch (l) {
        case GoldLabel::Conv: return "conv";
        case GoldLabel::Unconv: return "unconv";
        case GoldLabel::Reject: return "reject";
    }
    return "?";
}

GoldLabel parse_gold_label(std::string_view s) {
    const auto l = text::to_lower(s);
    if (l == "conv") return GoldLabel::Conv;
    if (l == "unconv") return GoldLabel::Unconv;
    if (l == "reject" || l.starts_with("reject:")) return GoldLabel::Reject;
    throw InputError("unknown gold label '" + std::string(s) + "'");
}

double cohen_kappa(std::span<const int> a, std::span<const int> b, int k) {
    if (a.size() != b.size()) throw InputError("cohen_kappa: rater vectors differ in length");
    if (a.empty()) throw DegenerateError("cohen_kappa: no items");
    const auto n = static_cast<double>(a.size());
    std::vector<double> pa(static_cast<std::size_t>(k), 0.0), pb(static_cast<std::size_t>(k), 0.0);
    double observed = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 0 || a[i] >= k || b[i] < 0 || b[i] >= k) throw InputError("cohen_kappa: label out of range");
        pa[static_cast<std::size_t>(a[i])] += 1.0;
        pb[static_cast<std::size_t>(b[i])] += 1.0;
        if (a[i] == b[i]) observed += 1.0;
    }
    observed /= n;
    double expected = 0.0;
    for (std::size_t j = 0; j < pa.size(); ++j) expected += (pa[j] / n) * (pb[j] / n);
    if (expected >= 1.0) return observed >= 1.0 ? 1.0 : 0.0;
    return (observed - expected) / (1.0 - expected);
}

GoldValidation validate_against_gold(const std::vector<LabeledSentence>& predictions,
                                     const std::vector<LabeledSentence>& gold) {
    std::unordered_map<std::string, const LabeledSentence*> by_key;
    for (const auto& g : gold) {
        if (!by_key.emplace(g.key, &g).second) throw InputError("duplicate gold key '" + g.key + "'");
    }
    if (predictions.size() != gold.size()) throw InputError("prediction and gold key sets differ in size");

    GoldValidation out;
    std::vector<int> a, b;
    for (const auto& p : predictions) {
        const auto it = by_key.find(p.key);
        if (it == by_key.end()) throw InputError("prediction key '" + p.key + "' has no gold label");
        const auto& g = *it->second;
        a.push_back(static_cast<int>(p.label));
        b.push_back(static_cast<int>(g.label));
        if (p.label != GoldLabel::Reject) {
            auto& stat = out.per_construction[g.construction];
            ++stat.predicted;
            ++out.overall.predicted;
            if (p.label == g.label) {
                ++stat.correct;
                ++out.overall.correct;
            }
        }
    }
    out.n = predictions.size();
    if (!a.empty()) out.kappa = cohen_kappa(a, b, 3);
    return out;
}

}  // namespace preempt
