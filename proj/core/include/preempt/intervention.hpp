#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "preempt/miner.hpp"
#include "preempt/stats/tests.hpp"
#include "preempt/stimulus.hpp"
#include "preempt/surprisal.hpp"

namespace preempt {

enum class Condition { Amplified, Attenuated, Reverse, Control };

inline constexpr std::array<Condition, 4> kConditions = {Condition::Amplified, Condition::Attenuated,
                                                         Condition::Reverse, Condition::Control};

std::string_view to_string(Condition c);
std::optional<Condition> parse_condition(std::string_view s);  // case-insensitive

/// Conventional share of a verb's generated sentences: 3/4, 1/2, 1/4, 1/2.
double conventional_share(Condition c);

struct InterventionPlan {
    std::vector<std::string> target_verbs;
    std::vector<std::string> control_verbs;
    int sentences_per_verb = 500;
    std::vector<std::uint64_t> seeds{42, 123, 456, 789, 1024};
    Construction construction = Construction::Dative;

    /// Control corpora are built from the control verbs, the other three
    /// conditions from the target verbs.
    const std::vector<std::string>& verbs_for(Condition c) const {
        return c == Condition::Control ? control_verbs : target_verbs;
    }
};

/// Exact (conventional, unconventional) counts for one verb; throws
/// InputError when the share does not divide sentences_per_verb exactly.
std::pair<int, int> condition_counts(Condition c, int sentences_per_verb);

struct ManifestEntry {
    int conv_count = 0;
    int unconv_count = 0;
    bool operator==(const ManifestEntry&) const = default;
};

struct CorpusManifest {
    Condition condition = Condition::Control;
    std::uint64_t seed = 0;
    std::map<std::string, ManifestEntry> verbs;
};

struct GeneratedCorpus {
    std::vector<std::string> sentences;
    CorpusManifest manifest;
};

/// Sentences for every verb of the condition, realizing the target ratio
/// exactly. Argument slots are filled round-robin from fixed 20-item pools
/// (starting offsets and final order depend on the seed). Throws InputError
/// when a verb has no stimulus entry for the plan's construction.
GeneratedCorpus generate_condition_corpus(const InterventionPlan& plan, Condition condition,
                                          const StimulusSet& templates, std::uint64_t seed);

void write_corpus(std::ostream& out, const GeneratedCorpus& corpus);
/// {"verb": {"conv_count": n, "unconv_count": m}, ...}
std::string manifest_json(const CorpusManifest& m);
CorpusManifest parse_manifest_json(const std::string& json, Condition condition, std::uint64_t seed);

struct DeltaDeltaRow {
    std::string verb;
    Construction construction = Construction::Dative;
    Condition condition = Condition::Control;
    std::uint64_t seed = 0;
    double delta_pre = 0.0;
    double delta_post = 0.0;
    double ddelta = 0.0;
};

struct ConditionAggregate {
    double mean = 0.0;
    double sd = 0.0;  // sample SD
    std::size_t n = 0;
};

struct DeltaDeltaReport {
    std::vector<DeltaDeltaRow> rows;

    /// Mean and SD over per-seed means (each seed's mean over its verbs).
    std::map<Condition, ConditionAggregate> by_condition() const;
    /// Per-verb ddelta averaged over seeds, for one condition.
    std::map<std::string, double> verb_means(Condition c) const;
};

/// Per-verb delta S of every (verb, construction) with complete frames in
/// a score set, ignoring model ids and condition tags. Throws InputError on
/// duplicate keys or incomplete verbs.
std::map<VerbKey, VerbDelta> deltas_by_verb(const ScoreSet& scores);

/// ddelta = delta_S(post) - delta_S(pre) for every verb. Both sets must
/// cover the same (verb, construction) keys.
std::vector<DeltaDeltaRow> analyze_pre_post(const ScoreSet& pre, const ScoreSet& post, Condition condition,
                                            std::uint64_t seed);

/// Mean and sample SD of a list of per-seed values.
ConditionAggregate aggregate(std::span<const double> values);

/// Pooled independent t on |ddelta| (amplified versus reverse).
stats::TestResult asymmetry_test(std::span<const double> amplified, std::span<const double> reverse);

/// One-sample t of non-target ddelta against zero.
stats::TestResult specificity_check(std::span<const double> non_target);

struct RatioRawResult {
    double r_ratio = 0.0;
    double r_raw = 0.0;
    std::size_t n = 0;
};

/// Change in preemption score implied by adding the manifest counts to
/// the base frequencies of (verb, construction).
double preempt_change(const FrequencyCell& base, const ManifestEntry& added);

/// Pearson r of ddelta against the implied preemption-score change and
/// against the raw number of conventional sentences added. Rows are matched
/// to manifests by verb; every row needs a manifest entry and a base cell.
RatioRawResult ratio_vs_raw_correlation(std::span<const DeltaDeltaRow> rows,
                                        const std::vector<CorpusManifest>& manifests, const FrequencyTable& base);

}  // namespace preempt
