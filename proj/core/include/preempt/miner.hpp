#pragma once

// Construction mining: filters dependency-parsed sentences, classifies them
// into the two frames of each alternation, and aggregates per-verb counts.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "preempt/conllu.hpp"
#include "preempt/stimulus.hpp"

namespace preempt {

// Order matters: it is the order in which tallies are reported.
enum class RejectReason : std::uint8_t {
    TooShort,
    TooLong,
    Boilerplate,
    PosMismatch,
    LowConfidence,
    NoPatternMatch,
    SingleArgument,
    Periphrastic,
};
inline constexpr std::size_t kRejectReasons = 8;

std::string_view to_string(RejectReason r);
/// snake_case form used in CSV column names ("too_short", ...).
std::string_view column_name(RejectReason r);

struct ConstructionLabel {
    enum class Kind { Conv, Unconv, Reject };

    Kind kind = Kind::Reject;
    Variant variant = Variant::A;  // surface frame; meaningful unless Reject
    RejectReason reason = RejectReason::NoPatternMatch;  // meaningful for Reject

    static ConstructionLabel reject(RejectReason r) { return {Kind::Reject, Variant::A, r}; }
    static ConstructionLabel frame(Variant surface, Variant conventional) {
        return {surface == conventional ? Kind::Conv : Kind::Unconv, surface, RejectReason::NoPatternMatch};
    }

    bool is_reject() const { return kind == Kind::Reject; }
    bool operator==(const ConstructionLabel& o) const {
        if (kind != o.kind) return false;
        return kind == Kind::Reject ? reason == o.reason : variant == o.variant;
    }
};

struct FilterConfig {
    int min_tokens = 4;
    int max_tokens = 60;
    double confidence_threshold = 0.75;
};

/// Closed-class animacy lexicon: one noun lemma per line, '#' comments.
/// Personal pronouns other than "it" count as animate; proper nouns do too.
class AnimacyLexicon {
public:
    AnimacyLexicon() = default;
    explicit AnimacyLexicon(std::set<std::string> lemmas) : lemmas_(std::move(lemmas)) {}

    static AnimacyLexicon load(const std::string& path);
    static AnimacyLexicon parse(std::istream& in);

    bool is_animate(const Token& t) const;
    std::size_t size() const noexcept { return lemmas_.size(); }

private:
    std::set<std::string> lemmas_;
};

/// Index of the token whose lemma is `verb`, preferring a verbal tag.
std::optional<std::size_t> find_verb(const ParsedSentence& s, std::string_view verb);

/// Boilerplate flag, length bounds, POS agreement, parse confidence, in
/// that order. Returns the first failing reason, or nullopt when the
/// sentence passes. Throws InputError if `verb` does not occur.
std::optional<RejectReason> filter_sentence(const ParsedSentence& s, std::string_view verb,
                                            const FilterConfig& cfg = {});

// Pattern classifiers. Preconditions: filter_sentence passed. Surface frames
// are mapped to Conv/Unconv through `conventional`.
ConstructionLabel classify_dative(const ParsedSentence& s, std::string_view verb, Variant conventional,
                                  const AnimacyLexicon& animacy);
ConstructionLabel classify_causative(const ParsedSentence& s, std::string_view verb, Variant conventional);
ConstructionLabel classify_locative(const ParsedSentence& s, std::string_view verb, Variant conventional);

/// Filter then classify for one stimulus entry.
ConstructionLabel classify(const ParsedSentence& s, const VerbEntry& entry, const AnimacyLexicon& animacy,
                           const FilterConfig& cfg = {});

struct FrequencyCell {
    std::uint64_t f_conv = 0;
    std::uint64_t f_unconv = 0;
    std::array<std::uint64_t, kRejectReasons> rejects{};

    std::uint64_t classified() const { return f_conv + f_unconv; }
    std::uint64_t rejected() const;
    FrequencyCell& operator+=(const FrequencyCell& o);
    bool operator==(const FrequencyCell&) const = default;
};

using VerbKey = std::pair<std::string, Construction>;

class FrequencyTable {
public:
    FrequencyTable() = default;
    explicit FrequencyTable(std::string corpus_id) : corpus_id_(std::move(corpus_id)) {}

    /// Zero-initialise a cell for every stimulus verb.
    void seed(const StimulusSet& verbs);

    FrequencyCell& cell(const std::string& lemma, Construction c) { return cells_[{lemma, c}]; }
    const FrequencyCell* find(const std::string& lemma, Construction c) const;
    const std::map<VerbKey, FrequencyCell>& cells() const noexcept { return cells_; }

    void record(const std::string& lemma, Construction c, const ConstructionLabel& label);
    void record_parse_error() { ++parse_errors_; ++sentences_seen_; }
    void record_untargeted() { ++untargeted_; ++sentences_seen_; }

    std::uint64_t sentences_seen() const noexcept { return sentences_seen_; }
    std::uint64_t parse_errors() const noexcept { return parse_errors_; }
    std::uint64_t untargeted() const noexcept { return untargeted_; }
    const std::string& corpus_id() const noexcept { return corpus_id_; }
    void set_corpus_id(std::string id) { corpus_id_ = std::move(id); }

    /// Classified + rejected + parse errors + untargeted; equals sentences_seen().
    std::uint64_t tallied() const;

    /// Sum of classified counts for a lemma across constructions.
    std::uint64_t total(const std::string& lemma) const;

    /// Field-wise sum. Associative and commutative; corpus ids are joined with '+'
    /// in sorted order so merge order does not leak into the result.
    FrequencyTable& merge(const FrequencyTable& other);

    bool operator==(const FrequencyTable&) const = default;

private:
    std::string corpus_id_;
    std::map<VerbKey, FrequencyCell> cells_;
    std::uint64_t sentences_seen_ = 0;
    std::uint64_t parse_errors_ = 0;
    std::uint64_t untargeted_ = 0;
};

FrequencyTable merge(FrequencyTable a, const FrequencyTable& b);

/// Attributes a sentence to the first token whose lemma is a stimulus verb.
/// When that lemma belongs to several constructions, the first non-reject
/// classification wins; if all reject, the first construction's reason is
/// tallied.
class CorpusScanner {
public:
    CorpusScanner(const StimulusSet& verbs, AnimacyLexicon animacy, FilterConfig cfg = {});

    void add(const ParsedSentence& s, FrequencyTable& table) const;
    FrequencyTable scan(const std::vector<ParsedSentence>& sentences, const std::string& corpus_id = "") const;
    FrequencyTable scan(ConlluReader& reader, const std::string& corpus_id = "") const;

    /// Scans each file independently (in parallel up to `threads`) and merges.
    FrequencyTable scan_files(const std::vector<std::string>& paths, unsigned threads = 0) const;

    const FilterConfig& config() const noexcept { return cfg_; }

private:
    const StimulusSet& verbs_;
    AnimacyLexicon animacy_;
    FilterConfig cfg_;
    std::map<std::string, std::vector<const VerbEntry*>> by_lemma_;
};

/// CSV: lemma,construction,f_conv,f_unconv,reject_<reason>... with a header row.
void write_frequency_csv(std::ostream& out, const FrequencyTable& t);
FrequencyTable read_frequency_csv(std::istream& in, const std::string& source = "<stream>");
FrequencyTable load_frequency_csv(const std::string& path);

/// JSON summary (totals, reject tallies, per-verb counts and scores).
std::string frequency_summary_json(const FrequencyTable& t);

}  // namespace preempt
