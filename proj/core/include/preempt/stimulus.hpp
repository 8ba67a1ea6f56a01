#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace preempt {

enum class Construction { Dative, Causative, Locative };
enum class Category { Strong, Weak, None };
enum class Competing { PlusCompeting, MinusCompeting, Unassigned };

// Surface frame of an alternation. Per construction:
//   Dative:    A = prepositional (PD),   B = double object (DOD)
//   Causative: A = intransitive,         B = transitive
//   Locative:  A = content-oriented,     B = container-oriented
enum class Variant { A, B };

enum class Tense { SimplePast };

std::string_view to_string(Construction c);
std::string_view to_string(Category c);
std::string_view to_string(Competing c);
std::string_view to_string(Variant v);

std::optional<Construction> parse_construction(std::string_view s);
std::optional<Category> parse_category(std::string_view s);
std::optional<Competing> parse_competing(std::string_view s);
std::optional<Variant> parse_variant(std::string_view s);

/// Human-readable name of a variant for a given construction ("PD", "DOD", ...).
std::string_view variant_name(Construction c, Variant v);

inline constexpr std::size_t kFramesPerVerb = 5;

struct FrameTemplate {
    std::string subject;
    std::string theme;
    std::string recipient_or_goal;  // recipient (dative), goal (locative), causer-less theme slot unused
    std::string conventional_text;
    std::string unconventional_text;
    Tense tense = Tense::SimplePast;

    bool operator==(const FrameTemplate&) const = default;
};

struct VerbEntry {
    std::string lemma;
    Construction construction = Construction::Dative;
    Category category = Category::None;
    Competing competing = Competing::Unassigned;
    Variant conventional_variant = Variant::A;
    std::array<FrameTemplate, kFramesPerVerb> frames{};

    Variant unconventional_variant() const {
        return conventional_variant == Variant::A ? Variant::B : Variant::A;
    }

    bool operator==(const VerbEntry&) const = default;
};

struct SentencePair {
    std::string verb;
    int frame_index = 0;
    std::string conventional;
    std::string unconventional;

    bool operator==(const SentencePair&) const = default;
};

/// Ordered collection of verb entries, unique by (lemma, construction).
class StimulusSet {
public:
    StimulusSet() = default;

    /// Throws InputError on a duplicate (lemma, construction).
    void add(VerbEntry entry);

    const std::vector<VerbEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    const VerbEntry* find(std::string_view lemma, Construction c) const;

    /// Entries of one construction, in file order.
    std::vector<VerbEntry> of(Construction c) const;

    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }

private:
    std::vector<VerbEntry> entries_;
};

/// Parse the stimulus TSV. Columns, tab-separated:
///   lemma construction category competing conventional_variant
///   frame_index conventional_text unconventional_text
/// A header row beginning with "lemma" and lines starting with '#' are
/// skipped. frame_index is 0-based. Errors carry the offending line number.
StimulusSet parse_stimuli(std::istream& in, const std::string& source = "<stream>");
StimulusSet load_stimuli(const std::string& path);

/// Inverse of parse_stimuli (writes a header row).
void write_stimuli(std::ostream& out, const StimulusSet& set);

std::vector<SentencePair> instantiate_pairs(const VerbEntry& entry);

/// Inflected forms of a verb lemma (base, 3sg, past, participle, gerund).
std::vector<std::string> verb_forms(std::string_view lemma);
std::string past_tense(std::string_view lemma);

/// Fill subject/theme/recipient_or_goal from the frame texts when the
/// construction's surface pattern can be recognised; fields stay empty
/// otherwise.
void derive_roles(const VerbEntry& entry, FrameTemplate& frame);

struct FrameCheck {
    int frame_index = 0;
    int conventional_words = 0;
    int unconventional_words = 0;
    int delta() const { return conventional_words - unconventional_words; }
};

struct VerbValidation {
    std::string lemma;
    Construction construction = Construction::Dative;
    std::vector<FrameCheck> frames;
    double mean_length = 0.0;
    double sd_length = 0.0;
    bool tense_uniform = true;
};

struct ControlViolation {
    enum class Kind { LengthMismatch, VerbCount, TenseMismatch };
    std::string lemma;
    Construction construction = Construction::Dative;
    int frame_index = 0;
    Kind kind = Kind::LengthMismatch;
    std::string detail;
};

struct ValidationReport {
    std::vector<VerbValidation> verbs;
    std::vector<ControlViolation> violations;
    double mean_length = 0.0;  // over every instantiated sentence
    double sd_length = 0.0;
    std::size_t sentences = 0;
};

inline constexpr int kMaxWordDelta = 2;

/// Checks the matching controls: word-count delta within +/-2 per frame,
/// exactly one form of the verb per sentence, simple-past verb forms.
/// Never throws; problems are reported as violations.
ValidationReport validate_controls(const StimulusSet& set);

}  // namespace preempt
