#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "preempt/conllu.hpp"
#include "preempt/stimulus.hpp"
#include "preempt/surprisal.hpp"

namespace preempt::testing {

/// Absolute path of a file under the repository's data/ directory.
std::string data_path(std::string_view relative);

/// Build a parsed sentence from "form lemma UPOS head deprel | ..." (heads 1-based).
ParsedSentence parse_spec(std::string_view spec, std::string id = "s");

/// n values whose sample mean and sample SD (n - 1) equal the targets exactly,
/// up to rounding. Shape comes from seeded normal draws.
std::vector<double> planted_sample(std::size_t n, double mean, double sd, std::uint64_t seed);

/// Add five frames of single-word records for one verb: conventional
/// bits/word vary by frame, unconventional = conventional + delta.
void add_verb_scores(ScoreSet& set, const std::string& model, const std::string& verb, Construction c, double delta,
                     const std::optional<std::string>& condition = std::nullopt, double base_bits = 4.0);

StimulusSet subset(const StimulusSet& all, const std::function<bool(const VerbEntry&)>& keep);

/// The bundled stimulus inventory.
const StimulusSet& bundled_stimuli();

}  // namespace preempt::testing
