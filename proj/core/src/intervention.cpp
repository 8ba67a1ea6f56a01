#include "preempt/intervention.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <random>
#include <set>

#include <json.hpp>

#include "preempt/error.hpp"
#include "preempt/scores.hpp"
#include "preempt/stats/correlation.hpp"
#include "preempt/stats/descriptive.hpp"
#include "preempt/text.hpp"

namespace preempt {

std::string_view to_string(Condition c) {
    switch (c) {
        case Condition::Amplified: return "Amplified";
        case Condition::Attenuated: return "Attenuated";
        case Condition::Reverse: return "Reverse";
        case Condition::Control: return "Control";
    }
    return "?";
}

std::optional<Condition> parse_condition(std::string_view s) {
    const auto l = text::to_lower(s);
    for (auto c : kConditions) {
        if (text::to_lower(to_string(c)) == l) return c;
    }
    return std::nullopt;
}

double conventional_share(Condition c) {
    switch (c) {
        case Condition::Amplified: return 0.75;
        case Condition::Reverse: return 0.25;
        case Condition::Attenuated:
        case Condition::Control: return 0.5;
    }
    return 0.5;
}

std::pair<int, int> condition_counts(Condition c, int sentences_per_verb) {
    if (sentences_per_verb < 1) throw InputError("sentences_per_verb must be positive");
    const double conv = conventional_share(c) * sentences_per_verb;
    if (conv != std::floor(conv)) {
        throw InputError("sentences_per_verb " + std::to_string(sentences_per_verb) + " cannot realize the " +
                         std::string(to_string(c)) + " ratio exactly");
    }
    const int n = static_cast<int>(conv);
    return {n, sentences_per_verb - n};
}

namespace {

using Pool = std::array<std::string_view, 20>;

constexpr Pool kSubjects = {
    "The young teacher", "The old farmer",   "The tall nurse",     "The busy lawyer",   "The quiet student",
    "The new manager",   "The kind doctor",  "The local baker",    "The proud captain", "The shy author",
    "The brave pilot",   "The calm judge",   "The eager intern",   "The tired chef",    "The strict coach",
    "The wise mayor",    "The happy artist", "The careful driver", "The polite clerk",  "The clever scientist"};
constexpr Pool kThemes = {"book",   "letter", "package", "ticket", "painting", "recipe", "photo",
                          "report", "gift",   "map",     "key",    "blanket",  "record", "lamp",
                          "basket", "poster", "coin",    "scarf",  "bottle",   "note"};
constexpr Pool kRecipients = {"neighbor", "student", "visitor", "manager", "child",   "guest",  "friend",
                              "officer",  "patient", "client",  "cousin",  "soldier", "worker", "reporter",
                              "tourist",  "nurse",   "player",  "teacher", "owner",   "writer"};
constexpr Pool kObjects = {"window", "vase",   "door",   "engine", "bell",   "light", "machine",
                           "branch", "candle", "rope",   "wheel",  "gate",   "fan",   "boat",
                           "clock",  "plate",  "ball",   "kite",   "ladder", "mirror"};
constexpr Pool kSubstances = {"water", "sand", "paint", "flour",  "hay",   "oil",    "soup",
                              "rice",  "salt", "mud",   "juice",  "sugar", "gravel", "milk",
                              "seeds", "tea",  "ink",   "cereal", "soil",  "coffee"};
constexpr Pool kContainers = {"bucket", "glass", "wagon", "jar",   "barrel", "cart",  "crate",
                              "bowl",   "box",   "truck", "sack",  "tank",   "cup",   "basin",
                              "tray",   "pan",   "pot",   "vase",  "trunk",  "bin"};
constexpr Pool kAdjuncts = {"last week",      "this morning",     "after lunch",  "before dinner",  "on Monday",
                            "last night",     "yesterday",        "at noon",      "on Friday",      "that evening",
                            "in the morning", "after the meeting", "last summer", "before school",  "at dawn",
                            "on Sunday",      "that afternoon",   "last winter",  "after the game", "at midnight"};

std::string capitalize(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

struct Slots {
    std::size_t subject, theme, recipient, object, substance, container, adjunct;
};

std::string realize(Construction cx, Variant surface, const std::string& past, const Slots& s) {
    const std::string subj(kSubjects[s.subject]);
    const std::string adj(kAdjuncts[s.adjunct]);
    switch (cx) {
        case Construction::Dative:
            if (surface == Variant::A) {
                return subj + " " + past + " the " + std::string(kThemes[s.theme]) + " to the " +
                       std::string(kRecipients[s.recipient]) + " " + adj + ".";
            }
            return subj + " " + past + " the " + std::string(kRecipients[s.recipient]) + " the " +
                   std::string(kThemes[s.theme]) + " " + adj + ".";
        case Construction::Causative:
            if (surface == Variant::A) {
                return capitalize("the old " + std::string(kObjects[s.object])) + " " + past + " near the " +
                       std::string(kContainers[s.container]) + " " + adj + ".";
            }
            return subj + " " + past + " the old " + std::string(kObjects[s.object]) + " " + adj + ".";
        case Construction::Locative:
            if (surface == Variant::A) {
                return subj + " " + past + " the " + std::string(kSubstances[s.substance]) + " into the " +
                       std::string(kContainers[s.container]) + " " + adj + ".";
            }
            return subj + " " + past + " the " + std::string(kContainers[s.container]) + " with the " +
                   std::string(kSubstances[s.substance]) + " " + adj + ".";
    }
    return {};
}

// Fisher-Yates with a plain modulo draw so the output does not depend on
// the standard library's distribution implementation.
template <typename T>
void portable_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng() % i);
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace

GeneratedCorpus generate_condition_corpus(const InterventionPlan& plan, Condition condition,
                                          const StimulusSet& templates, std::uint64_t seed) {
    const auto [n_conv, n_unconv] = condition_counts(condition, plan.sentences_per_verb);
    const auto& verbs = plan.verbs_for(condition);
    if (verbs.empty()) throw InputError("intervention plan has no verbs for condition " + std::string(to_string(condition)));
    std::vector<std::string> missing;
    for (const auto& v : verbs) {
        if (templates.find(v, plan.construction) == nullptr) missing.push_back(v);
    }
    if (!missing.empty()) {
        std::string msg = "no template for verb(s):";
        for (const auto& m : missing) msg += " " + m;
        throw InputError(msg);
    }

    std::mt19937_64 rng(seed);
    GeneratedCorpus out;
    out.manifest.condition = condition;
    out.manifest.seed = seed;
    for (const auto& v : verbs) {
        const auto& entry = *templates.find(v, plan.construction);
        const auto past = past_tense(v);
        std::array<std::size_t, 7> offset{};
        for (auto& o : offset) o = static_cast<std::size_t>(rng() % 20);
        const int total = n_conv + n_unconv;
        for (int i = 0; i < total; ++i) {
            const auto k = static_cast<std::size_t>(i);
            const Slots s{(offset[0] + k) % 20, (offset[1] + k) % 20, (offset[2] + k) % 20, (offset[3] + k) % 20,
                          (offset[4] + k) % 20, (offset[5] + k) % 20, (offset[6] + k) % 20};
            const auto surface = i < n_conv ? entry.conventional_variant : entry.unconventional_variant();
            out.sentences.push_back(realize(entry.construction, surface, past, s));
        }
        auto& m = out.manifest.verbs[v];
        m.conv_count += n_conv;
        m.unconv_count += n_unconv;
    }
    portable_shuffle(out.sentences, rng);
    return out;
}

void write_corpus(std::ostream& out, const GeneratedCorpus& corpus) {
    for (const auto& s : corpus.sentences) out << s << '\n';
}

std::string manifest_json(const CorpusManifest& m) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    for (const auto& [verb, e] : m.verbs) {
        j[verb] = {{"conv_count", e.conv_count}, {"unconv_count", e.unconv_count}};
    }
    return j.dump(2);
}

CorpusManifest parse_manifest_json(const std::string& text, Condition condition, std::uint64_t seed) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("manifest: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InputError("manifest: expected a JSON object keyed by verb");
    CorpusManifest m;
    m.condition = condition;
    m.seed = seed;
    for (const auto& [verb, v] : j.items()) {
        if (!v.is_object() || !v.contains("conv_count") || !v.contains("unconv_count") ||
            !v["conv_count"].is_number_integer() || !v["unconv_count"].is_number_integer()) {
            throw InputError("manifest: entry for '" + verb + "' needs integer conv_count and unconv_count");
        }
        ManifestEntry e{v["conv_count"].get<int>(), v["unconv_count"].get<int>()};
        if (e.conv_count < 0 || e.unconv_count < 0) throw InputError("manifest: negative count for '" + verb + "'");
        m.verbs[verb] = e;
    }
    return m;
}

std::map<Condition, ConditionAggregate> DeltaDeltaReport::by_condition() const {
    std::map<Condition, std::map<std::uint64_t, std::vector<double>>> per_seed;
    for (const auto& r : rows) per_seed[r.condition][r.seed].push_back(r.ddelta);
    std::map<Condition, ConditionAggregate> out;
    for (const auto& [c, seeds] : per_seed) {
        std::vector<double> means;
        for (const auto& [s, v] : seeds) means.push_back(stats::mean(v));
        out[c] = aggregate(means);
    }
    return out;
}

std::map<std::string, double> DeltaDeltaReport::verb_means(Condition c) const {
    std::map<std::string, std::vector<double>> by_verb;
    for (const auto& r : rows) {
        if (r.condition == c) by_verb[r.verb].push_back(r.ddelta);
    }
    std::map<std::string, double> out;
    for (const auto& [v, xs] : by_verb) out[v] = stats::mean(xs);
    return out;
}

std::map<VerbKey, VerbDelta> deltas_by_verb(const ScoreSet& scores) {
    using Slot = std::array<const SentenceSurprisal*, 2>;
    std::map<VerbKey, std::map<int, Slot>> grouped;
    for (const auto& r : scores.records()) {
        auto& slot = grouped[{r.key.verb, r.key.construction}][r.key.frame];
        auto& cell = slot[r.key.variant == SurfaceRole::Conv ? 0 : 1];
        if (cell != nullptr) {
            throw InputError("score set has more than one record for " + r.key.verb + "/" +
                             std::string(to_string(r.key.construction)) + "/frame " + std::to_string(r.key.frame) +
                             "/" + std::string(to_string(r.key.variant)));
        }
        cell = &r;
    }
    std::map<VerbKey, VerbDelta> out;
    for (const auto& [key, frames] : grouped) {
        std::vector<SentenceSurprisal> conv, unconv;
        for (const auto& [f, slot] : frames) {
            if (slot[0] == nullptr || slot[1] == nullptr) {
                throw InputError("score set lacks one variant of " + key.first + " frame " + std::to_string(f));
            }
            conv.push_back(*slot[0]);
            unconv.push_back(*slot[1]);
        }
        out.emplace(key, delta_s(conv, unconv));
    }
    return out;
}

std::vector<DeltaDeltaRow> analyze_pre_post(const ScoreSet& pre, const ScoreSet& post, Condition condition,
                                            std::uint64_t seed) {
    const auto a = deltas_by_verb(pre);
    const auto b = deltas_by_verb(post);
    std::vector<std::string> diff;
    for (const auto& [k, d] : a) {
        if (!b.count(k)) diff.push_back(k.first + " (missing after)");
        else if (b.at(k).n_frames != d.n_frames) diff.push_back(k.first + " (frame count differs)");
    }
    for (const auto& [k, d] : b) {
        if (!a.count(k)) diff.push_back(k.first + " (missing before)");
    }
    if (!diff.empty()) {
        std::string msg = "pre and post score sets cover different keys:";
        for (const auto& d : diff) msg += " " + d;
        throw InputError(msg);
    }
    std::vector<DeltaDeltaRow> rows;
    for (const auto& [k, d] : a) {
        const auto& p = b.at(k);
        rows.push_back({k.first, k.second, condition, seed, d.delta_s, p.delta_s, p.delta_s - d.delta_s});
    }
    return rows;
}

ConditionAggregate aggregate(std::span<const double> values) {
    return {stats::mean(values), stats::sd(values), values.size()};
}

stats::TestResult asymmetry_test(std::span<const double> amplified, std::span<const double> reverse) {
    std::vector<double> a, r;
    for (double v : amplified) a.push_back(std::fabs(v));
    for (double v : reverse) r.push_back(std::fabs(v));
    return stats::independent_t(a, r, true);
}

stats::TestResult specificity_check(std::span<const double> non_target) {
    if (non_target.empty()) throw InputError("specificity_check: no non-target values");
    return stats::one_sample_t(non_target, 0.0);
}

double preempt_change(const FrequencyCell& base, const ManifestEntry& added) {
    const auto fc = base.f_conv + static_cast<std::uint64_t>(added.conv_count);
    const auto fu = base.f_unconv + static_cast<std::uint64_t>(added.unconv_count);
    return preempt_score(fc, fu) - preempt_score(base.f_conv, base.f_unconv);
}

RatioRawResult ratio_vs_raw_correlation(std::span<const DeltaDeltaRow> rows,
                                        const std::vector<CorpusManifest>& manifests, const FrequencyTable& base) {
    std::vector<double> dd, ratio, raw;
    for (const auto& r : rows) {
        const ManifestEntry* entry = nullptr;
        for (const auto& m : manifests) {
            if (m.condition != r.condition || m.seed != r.seed) continue;
            const auto it = m.verbs.find(r.verb);
            if (it != m.verbs.end()) entry = &it->second;
        }
        if (entry == nullptr) {
            throw InputError("no manifest entry for " + r.verb + " (" + std::string(to_string(r.condition)) +
                             ", seed " + std::to_string(r.seed) + ")");
        }
        const auto* cell = base.find(r.verb, r.construction);
        if (cell == nullptr) throw InputError("no base frequencies for " + r.verb);
        dd.push_back(r.ddelta);
        ratio.push_back(preempt_change(*cell, *entry));
        raw.push_back(static_cast<double>(entry->conv_count));
    }
    RatioRawResult out;
    out.n = dd.size();
    out.r_ratio = stats::pearson_r(dd, ratio);
    out.r_raw = stats::pearson_r(dd, raw);
    return out;
}

}  // namespace preempt
