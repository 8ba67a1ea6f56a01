#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "preempt/stimulus.hpp"

namespace preempt {

inline constexpr double kLn2 = 0.69314718055994530942;

struct TokenScore {
    std::string token;
    double logprob = 0.0;  // natural log, <= 0
};

enum class SurfaceRole { Conv, Unconv };

std::string_view to_string(SurfaceRole r);

struct ScoreKey {
    std::string verb;
    Construction construction = Construction::Dative;
    int frame = 0;
    SurfaceRole variant = SurfaceRole::Conv;
    std::optional<std::string> condition;

    auto tie() const { return std::tie(verb, construction, frame, variant, condition); }
    bool operator<(const ScoreKey& o) const { return tie() < o.tie(); }
    bool operator==(const ScoreKey& o) const { return tie() == o.tie(); }
};

std::string describe(const ScoreKey& k);

struct SentenceSurprisal {
    ScoreKey key;
    std::string model_id;
    std::vector<std::string> tokens;
    std::vector<double> logprobs;  // natural log, as ingested
    double total_bits = 0.0;
    int word_count = 1;
    double bits_per_word = 0.0;

    bool operator==(const SentenceSurprisal&) const = default;
};

/// Build a record from natural-log token probabilities; converts to bits.
/// Throws InputError on logprob > 0, length mismatch or word_count < 1.
SentenceSurprisal make_sentence_surprisal(ScoreKey key, std::string model_id, std::vector<std::string> tokens,
                                          std::vector<double> logprobs, int word_count);

/// Sentence-level scores from one or more models, unique by (model_id, key).
class ScoreSet {
public:
    void add(SentenceSurprisal s);  // throws InputError on a duplicate

    const std::vector<SentenceSurprisal>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

    const SentenceSurprisal* find(const std::string& model_id, const ScoreKey& key) const;
    std::set<std::string> model_ids() const;

    ScoreSet for_model(const std::string& model_id) const;

    std::string provenance;

    bool operator==(const ScoreSet& o) const { return records_ == o.records_; }

private:
    std::vector<SentenceSurprisal> records_;
    std::map<std::pair<std::string, ScoreKey>, std::size_t> index_;
};

/// Parse logprob JSONL (one object per line):
///   {"verb", "construction", "frame", "variant": "conv"|"unconv",
///    "condition": str|null, "words", "tokens", "logprobs", "model_id"}
ScoreSet parse_scores(std::istream& in, const std::string& source = "<stream>");
ScoreSet ingest_scores(const std::string& path);

void write_scores(std::ostream& out, const ScoreSet& set);
std::string to_jsonl_line(const SentenceSurprisal& s);

/// -sum(logprob) / (ln 2 * word_count). Throws InputError for word_count < 1.
double mean_surprisal(std::span<const TokenScore> tokens, int word_count);

struct VerbDelta {
    std::string verb;
    Construction construction = Construction::Dative;
    double delta_s = 0.0;  // bits/word, unconventional minus conventional
    int n_frames = 0;
    double conv_mean = 0.0;
    double unconv_mean = 0.0;
};

/// Mean unconventional bits/word minus mean conventional bits/word over
/// matching frames. Throws InputError when verbs or frame indices differ.
VerbDelta delta_s(std::span<const SentenceSurprisal> conv, std::span<const SentenceSurprisal> unconv);

/// Per-verb deltas for every stimulus entry (optionally one construction),
/// using records of `model_id` with the given condition tag. Throws
/// InputError listing every absent key when coverage is incomplete.
std::vector<VerbDelta> compute_deltas(const ScoreSet& scores, const StimulusSet& stimuli,
                                      const std::string& model_id,
                                      const std::optional<std::string>& condition = std::nullopt,
                                      std::optional<Construction> only = std::nullopt);

/// Syntactic log-odds ratio in bits/word:
/// (sum model logprob - sum unigram logprob) / (ln 2 * word_count).
double slor(const SentenceSurprisal& sentence, std::span<const double> unigram_logprobs);

}  // namespace preempt
