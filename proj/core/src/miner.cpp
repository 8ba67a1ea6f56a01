#include "preempt/miner.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "preempt/error.hpp"
#include "preempt/scores.hpp"
#include "preempt/text.hpp"

namespace preempt {

std::string_view to_string(RejectReason r) {
    switch (r) {
        case RejectReason::TooShort: return "TooShort";
        case RejectReason::TooLong: return "TooLong";
        case RejectReason::Boilerplate: return "Boilerplate";
        case RejectReason::PosMismatch: return "PosMismatch";
        case RejectReason::LowConfidence: return "LowConfidence";
        case RejectReason::NoPatternMatch: return "NoPatternMatch";
        case RejectReason::SingleArgument: return "SingleArgument";
        case RejectReason::Periphrastic: return "Periphrastic";
    }
    return "?";
}

std::string_view column_name(RejectReason r) {
    switch (r) {
        case RejectReason::TooShort: return "too_short";
        case RejectReason::TooLong: return "too_long";
        case RejectReason::Boilerplate: return "boilerplate";
        case RejectReason::PosMismatch: return "pos_mismatch";
        case RejectReason::LowConfidence: return "low_confidence";
        case RejectReason::NoPatternMatch: return "no_pattern_match";
        case RejectReason::SingleArgument: return "single_argument";
        case RejectReason::Periphrastic: return "periphrastic";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Animacy

AnimacyLexicon AnimacyLexicon::parse(std::istream& in) {
    std::set<std::string> lemmas;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = text::trim(line);
        if (t.empty() || t.front() == '#') continue;
        lemmas.insert(text::to_lower(t));
    }
    return AnimacyLexicon(std::move(lemmas));
}

AnimacyLexicon AnimacyLexicon::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open animacy lexicon: " + path);
    return parse(in);
}

bool AnimacyLexicon::is_animate(const Token& t) const {
    const auto lemma = text::to_lower(t.lemma);
    if (t.upos == "PRON") {
        static const std::set<std::string> animate_pronouns = {
            "i", "me", "you", "he", "him", "she", "her", "we", "us", "they", "them", "someone", "everyone",
            "somebody", "everybody", "anyone", "anybody", "nobody", "who", "whom"};
        return animate_pronouns.count(lemma) > 0;
    }
    if (t.upos == "PROPN") return true;
    return lemmas_.count(lemma) > 0;
}

// ---------------------------------------------------------------------------
// Filtering

namespace {

bool is_verbal(const Token& t) { return t.upos == "VERB"; }

bool is_object(const std::string& deprel) { return deprel == "dobj" || deprel == "obj"; }
bool is_indirect_object(const std::string& deprel) { return deprel == "iobj" || deprel == "dative"; }
bool is_subject(const std::string& deprel) { return deprel == "nsubj"; }
bool is_passive_subject(const std::string& deprel) {
    return deprel == "nsubjpass" || deprel == "nsubj:pass" || deprel == "auxpass" || deprel == "aux:pass";
}
bool is_nominal(const Token& t) { return t.upos == "NOUN" || t.upos == "PROPN" || t.upos == "PRON"; }

}  // namespace

std::optional<std::size_t> find_verb(const ParsedSentence& s, std::string_view verb) {
    std::optional<std::size_t> first;
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        if (s.tokens[i].lemma != verb) continue;
        if (is_verbal(s.tokens[i])) return i;
        if (!first) first = i;
    }
    return first;
}

std::optional<RejectReason> filter_sentence(const ParsedSentence& s, std::string_view verb, const FilterConfig& cfg) {
    const auto v = find_verb(s, verb);
    if (!v) throw InputError("verb '" + std::string(verb) + "' does not occur in sentence " + s.id);
    if (s.boilerplate) return RejectReason::Boilerplate;
    const auto n = static_cast<int>(s.tokens.size());
    if (n < cfg.min_tokens) return RejectReason::TooShort;
    if (n > cfg.max_tokens) return RejectReason::TooLong;
    if (!is_verbal(s.tokens[*v])) return RejectReason::PosMismatch;
    if (s.parse_confidence < cfg.confidence_threshold) return RejectReason::LowConfidence;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Pattern matching

namespace {

// A prepositional dependent of the verb: spaCy style (prep -> pobj) or UD
// style (obl with a case marker). Returns (preposition lemma, object index).
struct PrepPhrase {
    std::string prep;
    std::size_t object;
};

std::vector<PrepPhrase> prep_phrases(const ParsedSentence& s, std::size_t v) {
    std::vector<PrepPhrase> out;
    for (auto c : s.children(v)) {
        const auto& t = s.tokens[c];
        if (t.deprel == "prep") {
            for (auto g : s.children(c)) {
                if (s.tokens[g].deprel == "pobj") {
                    out.push_back({text::to_lower(t.lemma), g});
                    break;
                }
            }
        } else if (t.deprel == "obl" || t.deprel.starts_with("obl:")) {
            for (auto g : s.children(c)) {
                if (s.tokens[g].deprel == "case") {
                    out.push_back({text::to_lower(s.tokens[g].lemma), c});
                    break;
                }
            }
        }
    }
    return out;
}

bool has_child(const ParsedSentence& s, std::size_t v, bool (*pred)(const std::string&)) {
    for (auto c : s.children(v)) {
        if (pred(s.tokens[c].deprel)) return true;
    }
    return false;
}

// Contiguous token span [first, last] covered by the subtree rooted at i.
std::pair<std::size_t, std::size_t> subtree_span(const ParsedSentence& s, std::size_t i) {
    std::size_t lo = i, hi = i;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
        const auto k = stack.back();
        stack.pop_back();
        lo = std::min(lo, k);
        hi = std::max(hi, k);
        for (auto c : s.children(k)) stack.push_back(c);
    }
    return {lo, hi};
}

// Underspecified double object: the first two post-verbal nominal
// dependents (no preposition) are adjacent, the first animate, the second not.
bool adjacent_np_fallback(const ParsedSentence& s, std::size_t v, const AnimacyLexicon& animacy) {
    std::vector<std::size_t> nps;
    for (auto c : s.children(v)) {
        const auto& t = s.tokens[c];
        if (c <= v || !is_nominal(t)) continue;
        if (t.deprel == "prep" || t.deprel == "obl" || t.deprel.starts_with("obl:") || t.deprel == "conj" ||
            is_subject(t.deprel)) {
            continue;
        }
        nps.push_back(c);
    }
    if (nps.size() < 2) return false;
    const auto first = subtree_span(s, nps[0]);
    const auto second = subtree_span(s, nps[1]);
    if (first.first != v + 1 || second.first != first.second + 1) return false;
    return animacy.is_animate(s.tokens[nps[0]]) && !animacy.is_animate(s.tokens[nps[1]]);
}

std::size_t require_verb(const ParsedSentence& s, std::string_view verb) {
    const auto v = find_verb(s, verb);
    if (!v) throw InputError("verb '" + std::string(verb) + "' does not occur in sentence " + s.id);
    return *v;
}

}  // namespace

ConstructionLabel classify_dative(const ParsedSentence& s, std::string_view verb, Variant conventional,
                                  const AnimacyLexicon& animacy) {
    const auto v = require_verb(s, verb);
    const bool obj = has_child(s, v, is_object);
    if (obj && has_child(s, v, is_indirect_object)) return ConstructionLabel::frame(Variant::B, conventional);
    if (obj) {
        for (const auto& pp : prep_phrases(s, v)) {
            if (pp.prep == "to" || pp.prep == "for") return ConstructionLabel::frame(Variant::A, conventional);
        }
    }
    if (adjacent_np_fallback(s, v, animacy)) return ConstructionLabel::frame(Variant::B, conventional);
    return ConstructionLabel::reject(RejectReason::NoPatternMatch);
}

ConstructionLabel classify_causative(const ParsedSentence& s, std::string_view verb, Variant conventional) {
    const auto v = require_verb(s, verb);
    const auto& tok = s.tokens[v];
    if ((tok.deprel == "xcomp" || tok.deprel == "ccomp") && tok.head > 0) {
        const auto& matrix = s.tokens[static_cast<std::size_t>(tok.head - 1)];
        const auto m = text::to_lower(matrix.lemma);
        if (m == "make" || m == "cause" || m == "have") return ConstructionLabel::reject(RejectReason::Periphrastic);
    }
    if (has_child(s, v, is_passive_subject)) return ConstructionLabel::reject(RejectReason::NoPatternMatch);
    if (has_child(s, v, is_object)) return ConstructionLabel::frame(Variant::B, conventional);
    if (has_child(s, v, is_subject)) return ConstructionLabel::frame(Variant::A, conventional);
    return ConstructionLabel::reject(RejectReason::NoPatternMatch);
}

ConstructionLabel classify_locative(const ParsedSentence& s, std::string_view verb, Variant conventional) {
    const auto v = require_verb(s, verb);
    if (!has_child(s, v, is_object)) return ConstructionLabel::reject(RejectReason::NoPatternMatch);
    for (const auto& pp : prep_phrases(s, v)) {
        if (pp.prep == "onto" || pp.prep == "into" || pp.prep == "on" || pp.prep == "in") {
            return ConstructionLabel::frame(Variant::A, conventional);
        }
        if (pp.prep == "with") return ConstructionLabel::frame(Variant::B, conventional);
    }
    return ConstructionLabel::reject(RejectReason::SingleArgument);
}

ConstructionLabel classify(const ParsedSentence& s, const VerbEntry& entry, const AnimacyLexicon& animacy,
                           const FilterConfig& cfg) {
    if (auto r = filter_sentence(s, entry.lemma, cfg)) return ConstructionLabel::reject(*r);
    switch (entry.construction) {
        case Construction::Dative: return classify_dative(s, entry.lemma, entry.conventional_variant, animacy);
        case Construction::Causative: return classify_causative(s, entry.lemma, entry.conventional_variant);
        case Construction::Locative: return classify_locative(s, entry.lemma, entry.conventional_variant);
    }
    return ConstructionLabel::reject(RejectReason::NoPatternMatch);
}

// ---------------------------------------------------------------------------
// Frequency table

std::uint64_t FrequencyCell::rejected() const {
    std::uint64_t n = 0;
    for (auto r : rejects) n += r;
    return n;
}

FrequencyCell& FrequencyCell::operator+=(const FrequencyCell& o) {
    f_conv += o.f_conv;
    f_unconv += o.f_unconv;
    for (std::size_t i = 0; i < kRejectReasons; ++i) rejects[i] += o.rejects[i];
    return *this;
}

void FrequencyTable::seed(const StimulusSet& verbs) {
    for (const auto& e : verbs) cells_[{e.lemma, e.construction}];
}

const FrequencyCell* FrequencyTable::find(const std::string& lemma, Construction c) const {
    const auto it = cells_.find({lemma, c});
    return it == cells_.end() ? nullptr : &it->second;
}

void FrequencyTable::record(const std::string& lemma, Construction c, const ConstructionLabel& label) {
    auto& cell = cells_[{lemma, c}];
    switch (label.kind) {
        case ConstructionLabel::Kind::Conv: ++cell.f_conv; break;
        case ConstructionLabel::Kind::Unconv: ++cell.f_unconv; break;
        case ConstructionLabel::Kind::Reject: ++cell.rejects[static_cast<std::size_t>(label.reason)]; break;
    }
    ++sentences_seen_;
}

std::uint64_t FrequencyTable::tallied() const {
    std::uint64_t n = parse_errors_ + untargeted_;
    for (const auto& [k, c] : cells_) n += c.classified() + c.rejected();
    return n;
}

std::uint64_t FrequencyTable::total(const std::string& lemma) const {
    std::uint64_t n = 0;
    for (const auto& [k, c] : cells_) {
        if (k.first == lemma) n += c.classified();
    }
    return n;
}

FrequencyTable& FrequencyTable::merge(const FrequencyTable& other) {
    for (const auto& [k, c] : other.cells_) cells_[k] += c;
    sentences_seen_ += other.sentences_seen_;
    parse_errors_ += other.parse_errors_;
    untargeted_ += other.untargeted_;
    std::set<std::string> ids;
    for (const std::string* id : {static_cast<const std::string*>(&corpus_id_), &other.corpus_id_}) {
        for (auto& part : text::split(*id, '+')) {
            if (!part.empty()) ids.insert(part);
        }
    }
    corpus_id_.clear();
    for (const auto& id : ids) {
        if (!corpus_id_.empty()) corpus_id_ += '+';
        corpus_id_ += id;
    }
    return *this;
}

FrequencyTable merge(FrequencyTable a, const FrequencyTable& b) {
    a.merge(b);
    return a;
}

// ---------------------------------------------------------------------------
// Scanning

CorpusScanner::CorpusScanner(const StimulusSet& verbs, AnimacyLexicon animacy, FilterConfig cfg)
    : verbs_(verbs), animacy_(std::move(animacy)), cfg_(cfg) {
    for (const auto& e : verbs_) by_lemma_[e.lemma].push_back(&e);
}

void CorpusScanner::add(const ParsedSentence& s, FrequencyTable& table) const {
    for (const auto& tok : s.tokens) {
        const auto it = by_lemma_.find(tok.lemma);
        if (it == by_lemma_.end()) continue;
        const auto& entries = it->second;
        std::optional<ConstructionLabel> first_reject;
        for (const auto* e : entries) {
            const auto label = classify(s, *e, animacy_, cfg_);
            if (!label.is_reject()) {
                table.record(e->lemma, e->construction, label);
                return;
            }
            if (!first_reject) first_reject = label;
        }
        table.record(entries.front()->lemma, entries.front()->construction, *first_reject);
        return;
    }
    table.record_untargeted();
}

FrequencyTable CorpusScanner::scan(const std::vector<ParsedSentence>& sentences, const std::string& corpus_id) const {
    FrequencyTable table(corpus_id);
    table.seed(verbs_);
    for (const auto& s : sentences) {
        if (s.structural_error()) {
            table.record_parse_error();
        } else {
            add(s, table);
        }
    }
    return table;
}

FrequencyTable CorpusScanner::scan(ConlluReader& reader, const std::string& corpus_id) const {
    FrequencyTable table(corpus_id);
    table.seed(verbs_);
    while (auto rec = reader.next()) {
        if (!rec->sentence) {
            table.record_parse_error();
            continue;
        }
        add(*rec->sentence, table);
    }
    return table;
}

FrequencyTable CorpusScanner::scan_files(const std::vector<std::string>& paths, unsigned threads) const {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const auto scan_one = [this](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw InputError("cannot open corpus file: " + path);
        ConlluReader reader(in, path);
        return scan(reader, path);
    };
    FrequencyTable total;
    total.seed(verbs_);
    std::size_t next = 0;
    while (next < paths.size()) {
        std::vector<std::future<FrequencyTable>> batch;
        for (unsigned t = 0; t < threads && next < paths.size(); ++t, ++next) {
            batch.push_back(std::async(std::launch::async, scan_one, paths[next]));
        }
        for (auto& f : batch) total.merge(f.get());
    }
    return total;
}

// ---------------------------------------------------------------------------
// IO

void write_frequency_csv(std::ostream& out, const FrequencyTable& t) {
    out << "lemma,construction,f_conv,f_unconv";
    for (std::size_t r = 0; r < kRejectReasons; ++r) out << ",reject_" << column_name(static_cast<RejectReason>(r));
    out << '\n';
    for (const auto& [k, c] : t.cells()) {
        out << k.first << ',' << to_string(k.second) << ',' << c.f_conv << ',' << c.f_unconv;
        for (auto r : c.rejects) out << ',' << r;
        out << '\n';
    }
}

FrequencyTable read_frequency_csv(std::istream& in, const std::string& source) {
    FrequencyTable t;
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty()) continue;
        auto cols = text::split(line, ',');
        if (header.empty()) {
            header = cols;
            if (header.size() < 4 || header[0] != "lemma" || header[1] != "construction" || header[2] != "f_conv" ||
                header[3] != "f_unconv") {
                throw ParseError(source, lineno, "expected header lemma,construction,f_conv,f_unconv,...");
            }
            continue;
        }
        if (cols.size() != header.size()) throw ParseError(source, lineno, "column count does not match header");
        const auto cx = parse_construction(cols[1]);
        if (!cx) throw ParseError(source, lineno, "unknown construction '" + cols[1] + "'");
        if (t.find(cols[0], *cx)) throw ParseError(source, lineno, "duplicate row for " + cols[0]);
        auto& cell = t.cell(cols[0], *cx);
        const auto count = [&](const std::string& s) -> std::uint64_t {
            try {
                std::size_t used = 0;
                const auto v = std::stoull(s, &used);
                if (used != s.size()) throw std::invalid_argument(s);
                return v;
            } catch (const std::exception&) {
                throw ParseError(source, lineno, "count '" + s + "' is not a non-negative integer");
            }
        };
        cell.f_conv = count(cols[2]);
        cell.f_unconv = count(cols[3]);
        for (std::size_t i = 4; i < cols.size(); ++i) {
            for (std::size_t r = 0; r < kRejectReasons; ++r) {
                if (header[i] == "reject_" + std::string(column_name(static_cast<RejectReason>(r)))) {
                    cell.rejects[r] = count(cols[i]);
                }
            }
        }
    }
    return t;
}

FrequencyTable load_frequency_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open frequency table: " + path);
    auto t = read_frequency_csv(in, path);
    t.set_corpus_id(path);
    return t;
}

std::string frequency_summary_json(const FrequencyTable& t) {
    nlohmann::ordered_json j;
    j["corpus_id"] = t.corpus_id();
    j["sentences_seen"] = t.sentences_seen();
    j["parse_errors"] = t.parse_errors();
    j["untargeted"] = t.untargeted();
    std::uint64_t conv = 0, unconv = 0;
    std::array<std::uint64_t, kRejectReasons> rejects{};
    auto verbs = nlohmann::ordered_json::array();
    for (const auto& [k, c] : t.cells()) {
        conv += c.f_conv;
        unconv += c.f_unconv;
        for (std::size_t r = 0; r < kRejectReasons; ++r) rejects[r] += c.rejects[r];
        nlohmann::ordered_json v;
        v["lemma"] = k.first;
        v["construction"] = std::string(to_string(k.second));
        v["f_conv"] = c.f_conv;
        v["f_unconv"] = c.f_unconv;
        v["preempt"] = preempt_score(c.f_conv, c.f_unconv);
        if (c.classified() > 0) v["entrench"] = std::log(static_cast<double>(t.total(k.first)));
        verbs.push_back(std::move(v));
    }
    j["f_conv_total"] = conv;
    j["f_unconv_total"] = unconv;
    nlohmann::ordered_json rj;
    for (std::size_t r = 0; r < kRejectReasons; ++r) rj[std::string(column_name(static_cast<RejectReason>(r)))] = rejects[r];
    j["rejects"] = rj;
    j["verbs"] = std::move(verbs);
    return j.dump(2);
}

}  // namespace preempt
