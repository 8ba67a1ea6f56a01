#pragma once

// Experiment recipes. Each returns typed results plus an ExperimentReport
// whose tests have been FDR-adjusted as one family.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "preempt/human.hpp"
#include "preempt/intervention.hpp"
#include "preempt/miner.hpp"
#include "preempt/report.hpp"
#include "preempt/scaling.hpp"
#include "preempt/stats/correlation.hpp"
#include "preempt/stats/mixed_model.hpp"
#include "preempt/stats/permutation.hpp"
#include "preempt/stats/regression.hpp"
#include "preempt/stats/tests.hpp"
#include "preempt/stimulus.hpp"
#include "preempt/surprisal.hpp"

namespace preempt {

struct ExperimentOptions {
    std::string model_id;  // empty: the score set must hold exactly one model
    std::size_t bootstrap = 10000;
    std::size_t permutations = 10000;
    std::uint64_t seed = 42;
    double fdr_q = 0.05;
    std::vector<std::string> exclude_verbs;  // register-exclusion rerun (exp2)
};

/// The model id to analyse: `requested` if given (and present), otherwise
/// the only model in the set. Throws InputError otherwise.
std::string resolve_model(const ScoreSet& scores, const std::string& requested);

struct Exp1Result {
    std::string model_id;
    std::vector<VerbDelta> deltas;                      // every stimulus entry
    std::map<Category, stats::GroupSummary> dative;     // per category, dative verbs
    stats::TestResult strong_vs_none;                   // pooled independent t, dative
    double d_strong_none = 0.0;
    std::map<std::pair<Construction, Category>, stats::GroupSummary> by_construction;
    std::optional<stats::OrderingTestResult> ordering;  // Strong-vs-None d across constructions
    std::optional<HumanJoin> join;
    std::optional<stats::CorrelationResult> human;
    ExperimentReport report{"exp1"};
};

Exp1Result run_exp1(const ScoreSet& scores, const StimulusSet& stimuli, const HumanRatings* human,
                    const ExperimentOptions& opts = {});

struct Exp2Contrast {
    stats::GroupSummary plus;
    stats::GroupSummary minus;
    stats::TestResult t;
    double d = 0.0;
    double partial_preempt = 0.0;    // r(dS, Preempt | Entrench)
    double partial_entrench = 0.0;   // r(dS, Entrench | Preempt)
    std::size_t n_verbs = 0;
};

struct Exp2Result {
    std::string model_id;
    Exp2Contrast main;
    std::optional<Exp2Contrast> excluded;  // rerun without opts.exclude_verbs
    std::optional<double> human_partial_preempt;   // r(human, Preempt | Entrench)
    std::optional<double> human_partial_entrench;  // r(human, Entrench | Preempt)
    stats::OlsFit ols;                              // dS ~ P + E + P:E for the analysed model
    std::optional<stats::RegressionFit> mixed;      // across models, when there are >= 2
    std::vector<stats::VifEntry> vif;               // Preempt, Entrench
    std::vector<std::string> skipped_verbs;         // zero corpus frequency
    ExperimentReport report{"exp2"};
};

Exp2Result run_exp2(const ScoreSet& scores, const FrequencyTable& freq, const StimulusSet& stimuli,
                    const HumanRatings* human, const ExperimentOptions& opts = {});

struct Exp3Result {
    ScalingFit power;                     // with bootstrap CI on b
    std::vector<ScalingFit> comparison;   // ranked by AIC
    std::optional<JackknifeResult> jackknife;
    ExperimentReport report{"exp3"};
};

Exp3Result run_exp3(const std::vector<ScalingPoint>& points, const ExperimentOptions& opts = {});

struct Exp4Input {
    InterventionPlan plan;
    ScoreSet pre;
    std::map<std::pair<Condition, std::uint64_t>, ScoreSet> post;
    std::optional<FrequencyTable> base;      // for the ratio-vs-raw analysis
    std::vector<CorpusManifest> manifests;
};

struct Exp4Result {
    DeltaDeltaReport ddelta;                        // rows restricted to each condition's verbs
    std::map<Condition, ConditionAggregate> aggregates;
    std::optional<stats::TestResult> asymmetry;     // |ddelta| amplified vs reverse
    std::map<Condition, stats::TestResult> specificity;  // non-target verbs per target condition
    std::optional<RatioRawResult> ratio_vs_raw;
    ExperimentReport report{"exp4"};
};

/// Throws InputError when a (condition, seed) post-training score set
/// required by the plan is missing.
Exp4Result run_exp4(const Exp4Input& input, const ExperimentOptions& opts = {});

struct SeedValue {
    Condition condition = Condition::Control;
    std::uint64_t seed = 0;
    double ddelta = 0.0;
};

/// CSV `condition,seed,ddelta` of per-seed condition means.
std::vector<SeedValue> read_seed_table(std::istream& in, const std::string& source = "<stream>");

/// Aggregates printed per-seed values (mean and SD per condition) into an
/// exp4 report.
Exp4Result run_exp4_seed_table(const std::vector<SeedValue>& values, const ExperimentOptions& opts = {});

}  // namespace preempt
