#pragma once

// Interpolated Kneser-Ney n-gram language model.
//
// Sentences are padded with <s> ... </s>. Counts at the highest order are
// raw; lower orders use continuation counts (number of distinct left
// extensions), except for n-grams that begin with <s>, which keep raw
// counts since nothing can precede them. Every order uses the same fixed
// absolute discount. The unigram level interpolates with a uniform
// distribution over the vocabulary (seen words + </s> + <unk>), so unseen
// words always get finite probability and every conditional distribution
// sums to one.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "preempt/stimulus.hpp"
#include "preempt/surprisal.hpp"

namespace preempt {

/// Lowercase, split on whitespace and split trailing/leading punctuation
/// into separate tokens ("museum." -> "museum", ".").
std::vector<std::string> ngram_tokenize(std::string_view sentence);

class NgramModel {
public:
    static constexpr std::string_view kBos = "<s>";
    static constexpr std::string_view kEos = "</s>";
    static constexpr std::string_view kUnk = "<unk>";

    NgramModel() = default;

    /// Train on pre-tokenised sentences. Throws InputError for order < 1,
    /// discount outside (0, 1), or an empty corpus.
    static NgramModel train(const std::vector<std::vector<std::string>>& sentences, int order = 5,
                            double discount = 0.75);

    bool trained() const noexcept { return order_ > 0; }
    int order() const noexcept { return order_; }
    double discount() const noexcept { return discount_; }

    /// Predictable vocabulary: seen words, </s>, <unk>.
    std::vector<std::string> vocabulary() const;
    std::size_t vocabulary_size() const noexcept { return id_to_word_.size() - 1; }  // excludes <s>

    /// P(word | context); context is the preceding words (may include <s>).
    double prob(std::string_view word, std::span<const std::string> context) const;

    /// One natural-log probability per token (sentence start is implicit;
    /// </s> is not scored). Throws InputError if the model is untrained.
    std::vector<TokenScore> score(std::span<const std::string> tokens) const;

    /// Unigram (order-1) log-probabilities of each token, for SLOR.
    std::vector<double> unigram_logprobs(std::span<const std::string> tokens) const;

    void save(std::ostream& out) const;
    static NgramModel load(std::istream& in, const std::string& source = "<stream>");
    static NgramModel load_file(const std::string& path);

private:
    using Id = std::uint32_t;
    using Key = std::string;  // packed ids

    struct ContextStats {
        double total = 0.0;  // sum of adjusted counts over continuations
        double types = 0.0;  // number of continuations with positive count
    };

    Id lookup(std::string_view word) const;
    Id intern(const std::string& word);
    static Key pack(std::span<const Id> ids);
    double prob_ids(Id word, std::span<const Id> context) const;
    void rebuild();

    int order_ = 0;
    double discount_ = 0.75;
    std::vector<std::string> id_to_word_;
    std::unordered_map<std::string, Id> word_to_id_;
    // raw_[k-1]: raw counts of k-grams
    std::vector<std::unordered_map<Key, std::uint64_t>> raw_;
    // adjusted_[k-1]: counts used for estimation at order k
    std::vector<std::unordered_map<Key, double>> adjusted_;
    // context_[k-1]: statistics of (k-1)-gram contexts at order k
    std::vector<std::unordered_map<Key, ContextStats>> context_;
};

/// Score every conventional and unconventional frame sentence of `stimuli`
/// with `lm`, one record per sentence, tagged with `model_id` and `condition`.
ScoreSet score_stimuli(const NgramModel& lm, const StimulusSet& stimuli, const std::string& model_id,
                       const std::optional<std::string>& condition = std::nullopt);

}  // namespace preempt
