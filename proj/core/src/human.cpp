#include "preempt/human.hpp"

#include <fstream>
#include <istream>
#include <set>

#include "preempt/error.hpp"
#include "preempt/text.hpp"

namespace preempt {

HumanRatings parse_human(std::istream& in, HumanRatings::Kind kind, const std::string& source) {
    HumanRatings h;
    h.kind = kind;
    h.source = source;
    std::string line;
    std::size_t lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = text::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto cols = text::split(t, '\t');
        if (cols.size() != 2) throw ParseError(source, lineno, "expected 2 tab-separated columns");
        const auto lemma = std::string(text::trim(cols[0]));
        const auto value_text = std::string(text::trim(cols[1]));
        if (first && lemma == "lemma") {
            first = false;
            continue;
        }
        first = false;
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(value_text, &used);
            if (used != value_text.size()) throw std::invalid_argument(value_text);
        } catch (const std::exception&) {
            throw ParseError(source, lineno, "non-numeric rating '" + value_text + "'");
        }
        if (kind == HumanRatings::Kind::DaisBias && (v < 0.0 || v > 1.0)) {
            throw ParseError(source, lineno, "bias score outside [0, 1]");
        }
        if (!h.values.emplace(lemma, v).second) throw ParseError(source, lineno, "duplicate lemma '" + lemma + "'");
    }
    return h;
}

HumanRatings load_human(const std::string& path, HumanRatings::Kind kind) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open human ratings file: " + path);
    return parse_human(in, kind, path);
}

HumanJoin join_human(std::span<const VerbDelta> deltas, const HumanRatings& human) {
    HumanJoin j;
    std::set<std::string> seen;
    for (const auto& d : deltas) {
        if (!seen.insert(d.verb).second) throw InputError("join_human: verb '" + d.verb + "' occurs twice");
        const auto it = human.values.find(d.verb);
        if (it == human.values.end()) {
            j.unmatched.push_back(d.verb);
        } else {
            j.rows.push_back({d.verb, d.delta_s, it->second});
        }
    }
    for (const auto& [lemma, v] : human.values) {
        if (!seen.count(lemma)) j.human_only.push_back(lemma);
    }
    if (j.rows.empty()) throw InputError("join_human: no verb occurs in both the scores and " + human.source);
    return j;
}

}  // namespace preempt
