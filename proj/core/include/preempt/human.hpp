#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "preempt/surprisal.hpp"

namespace preempt {

/// Per-verb human judgments. DAIS-style files give a bias in [0, 1] (share
/// preferring the prepositional dative); Likert files give a mean rating.
struct HumanRatings {
    enum class Kind { DaisBias, LikertMean };

    Kind kind = Kind::DaisBias;
    std::string source;
    std::map<std::string, double> values;
};

/// Two-column TSV (`lemma<TAB>bias` or `lemma<TAB>mean_rating`) with an
/// optional header row and '#' comments. Duplicate lemmas and DAIS values
/// outside [0, 1] are errors with a line number.
HumanRatings parse_human(std::istream& in, HumanRatings::Kind kind, const std::string& source = "<stream>");
HumanRatings load_human(const std::string& path, HumanRatings::Kind kind);

struct HumanJoinRow {
    std::string lemma;
    double delta_s = 0.0;
    double human = 0.0;
};

struct HumanJoin {
    std::vector<HumanJoinRow> rows;          // in delta order
    std::vector<std::string> unmatched;      // verbs without a human value
    std::vector<std::string> human_only;     // human lemmas with no delta
};

/// Inner join on lemma. Throws InputError when the intersection is empty or
/// a lemma occurs twice among the deltas.
HumanJoin join_human(std::span<const VerbDelta> deltas, const HumanRatings& human);

}  // namespace preempt
