#include "preempt/stimulus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

#include "preempt/error.hpp"
#include "preempt/text.hpp"

namespace preempt {

std::string_view to_string(Construction c) {
    switch (c) {
        case Construction::Dative: return "Dative";
        case Construction::Causative: return "Causative";
        case Construction::Locative: return "Locative";
    }
    return "?";
}

std::string_view to_string(Category c) {
    switch (c) {
        case Category::Strong: return "Strong";
        case Category::Weak: return "Weak";
        case Category::None: return "None";
    }
    return "?";
}

std::string_view to_string(Competing c) {
    switch (c) {
        case Competing::PlusCompeting: return "PlusCompeting";
        case Competing::MinusCompeting: return "MinusCompeting";
        case Competing::Unassigned: return "Unassigned";
    }
    return "?";
}

std::string_view to_string(Variant v) { return v == Variant::A ? "A" : "B"; }

std::optional<Construction> parse_construction(std::string_view s) {
    const auto l = text::to_lower(s);
    if (l == "dative") return Construction::Dative;
    if (l == "causative") return Construction::Causative;
    if (l == "locative") return Construction::Locative;
    return std::nullopt;
}

std::optional<Category> parse_category(std::string_view s) {
    const auto l = text::to_lower(s);
    if (l == "strong") return Category::Strong;
    if (l == "weak") return Category::Weak;
    if (l == "none") return Category::None;
    return std::nullopt;
}

std::optional<Competing> parse_competing(std::string_view s) {
    const auto l = text::to_lower(s);
    if (l == "pluscompeting" || l == "+competing" || l == "+") return Competing::PlusCompeting;
    if (l == "minuscompeting" || l == "-competing" || l == "-") return Competing::MinusCompeting;
    if (l == "unassigned" || l.empty() || l == "na") return Competing::Unassigned;
    return std::nullopt;
}

std::optional<Variant> parse_variant(std::string_view s) {
    if (s == "A" || s == "a") return Variant::A;
    if (s == "B" || s == "b") return Variant::B;
    return std::nullopt;
}

std::string_view variant_name(Construction c, Variant v) {
    switch (c) {
        case Construction::Dative: return v == Variant::A ? "PD" : "DOD";
        case Construction::Causative: return v == Variant::A ? "Intransitive" : "Transitive";
        case Construction::Locative: return v == Variant::A ? "Content" : "Container";
    }
    return "?";
}

void StimulusSet::add(VerbEntry entry) {
    if (find(entry.lemma, entry.construction) != nullptr) {
        throw InputError("duplicate stimulus entry (" + entry.lemma + ", " +
                         std::string(to_string(entry.construction)) + ")");
    }
    entries_.push_back(std::move(entry));
}

const VerbEntry* StimulusSet::find(std::string_view lemma, Construction c) const {
    for (const auto& e : entries_) {
        if (e.construction == c && e.lemma == lemma) return &e;
    }
    return nullptr;
}

std::vector<VerbEntry> StimulusSet::of(Construction c) const {
    std::vector<VerbEntry> out;
    for (const auto& e : entries_) {
        if (e.construction == c) out.push_back(e);
    }
    return out;
}

namespace {

constexpr std::size_t kColumns = 8;

struct PendingEntry {
    VerbEntry entry;
    std::array<bool, kFramesPerVerb> seen{};
    std::size_t first_line = 0;
};

void finish(PendingEntry& p, StimulusSet& out, const std::string& source) {
    for (std::size_t i = 0; i < kFramesPerVerb; ++i) {
        if (!p.seen[i]) {
            throw ParseError(source, p.first_line,
                             "verb '" + p.entry.lemma + "' is missing frame " + std::to_string(i) +
                                 " (exactly 5 frames required)");
        }
    }
    for (auto& f : p.entry.frames) derive_roles(p.entry, f);
    try {
        out.add(std::move(p.entry));
    } catch (const InputError& e) {
        throw ParseError(source, p.first_line, e.what());
    }
}

}  // namespace

StimulusSet parse_stimuli(std::istream& in, const std::string& source) {
    StimulusSet out;
    std::optional<PendingEntry> pending;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty() || line.front() == '#') continue;
        auto cols = text::split(line, '\t');
        if (cols[0] == "lemma") continue;  // header
        if (cols.size() != kColumns) {
            throw ParseError(source, lineno,
                             "expected " + std::to_string(kColumns) + " tab-separated columns, got " +
                                 std::to_string(cols.size()));
        }
        const auto cx = parse_construction(cols[1]);
        const auto cat = parse_category(cols[2]);
        const auto comp = parse_competing(cols[3]);
        const auto var = parse_variant(cols[4]);
        if (!cx) throw ParseError(source, lineno, "unknown construction '" + cols[1] + "'");
        if (!cat) throw ParseError(source, lineno, "unknown category '" + cols[2] + "'");
        if (!comp) throw ParseError(source, lineno, "unknown competing label '" + cols[3] + "'");
        if (!var) throw ParseError(source, lineno, "conventional_variant must be A or B");
        int frame = -1;
        try {
            std::size_t used = 0;
            frame = std::stoi(cols[5], &used);
            if (used != cols[5].size()) frame = -1;
        } catch (const std::exception&) {
            frame = -1;
        }
        if (frame < 0 || frame >= static_cast<int>(kFramesPerVerb)) {
            throw ParseError(source, lineno, "frame_index must be an integer in [0, 4]");
        }
        if (cols[0].empty()) throw ParseError(source, lineno, "empty lemma");
        if (cols[6].empty() || cols[7].empty()) throw ParseError(source, lineno, "empty sentence text");

        const bool same = pending && pending->entry.lemma == cols[0] && pending->entry.construction == *cx;
        if (!same) {
            if (pending) finish(*pending, out, source);
            if (out.find(cols[0], *cx) != nullptr) {
                throw ParseError(source, lineno,
                                 "duplicate stimulus entry (" + cols[0] + ", " + std::string(to_string(*cx)) + ")");
            }
            pending.emplace();
            pending->entry.lemma = cols[0];
            pending->entry.construction = *cx;
            pending->entry.category = *cat;
            pending->entry.competing = *comp;
            pending->entry.conventional_variant = *var;
            pending->first_line = lineno;
        } else if (pending->entry.category != *cat || pending->entry.competing != *comp ||
                   pending->entry.conventional_variant != *var) {
            throw ParseError(source, lineno, "verb-level columns disagree with earlier rows for '" + cols[0] + "'");
        }
        auto& slot = pending->seen[static_cast<std::size_t>(frame)];
        if (slot) {
            throw ParseError(source, lineno,
                             "duplicate row for (" + cols[0] + ", " + std::string(to_string(*cx)) + ", frame " +
                                 std::to_string(frame) + ")");
        }
        slot = true;
        auto& f = pending->entry.frames[static_cast<std::size_t>(frame)];
        f.conventional_text = cols[6];
        f.unconventional_text = cols[7];
    }
    if (pending) finish(*pending, out, source);
    return out;
}

StimulusSet load_stimuli(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open stimulus file: " + path);
    return parse_stimuli(in, path);
}

void write_stimuli(std::ostream& out, const StimulusSet& set) {
    out << "lemma\tconstruction\tcategory\tcompeting\tconventional_variant\tframe_index\t"
           "conventional_text\tunconventional_text\n";
    for (const auto& e : set) {
        for (std::size_t i = 0; i < kFramesPerVerb; ++i) {
            out << e.lemma << '\t' << to_string(e.construction) << '\t' << to_string(e.category) << '\t'
                << to_string(e.competing) << '\t' << to_string(e.conventional_variant) << '\t' << i << '\t'
                << e.frames[i].conventional_text << '\t' << e.frames[i].unconventional_text << '\n';
        }
    }
}

std::vector<SentencePair> instantiate_pairs(const VerbEntry& entry) {
    std::vector<SentencePair> out;
    out.reserve(kFramesPerVerb);
    for (std::size_t i = 0; i < kFramesPerVerb; ++i) {
        out.push_back({entry.lemma, static_cast<int>(i), entry.frames[i].conventional_text,
                       entry.frames[i].unconventional_text});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Morphology

namespace {

struct Irregular {
    const char* past;
    const char* participle;
};

const std::unordered_map<std::string, Irregular>& irregulars() {
    static const std::unordered_map<std::string, Irregular> table = {
        {"bring", {"brought", "brought"}}, {"break", {"broke", "broken"}},   {"deal", {"dealt", "dealt"}},
        {"drive", {"drove", "driven"}},    {"feed", {"fed", "fed"}},         {"fly", {"flew", "flown"}},
        {"give", {"gave", "given"}},       {"grow", {"grew", "grown"}},      {"leave", {"left", "left"}},
        {"lend", {"lent", "lent"}},        {"pay", {"paid", "paid"}},        {"read", {"read", "read"}},
        {"repay", {"repaid", "repaid"}},   {"say", {"said", "said"}},        {"sell", {"sold", "sold"}},
        {"send", {"sent", "sent"}},        {"show", {"showed", "shown"}},    {"sleep", {"slept", "slept"}},
        {"slide", {"slid", "slid"}},       {"spread", {"spread", "spread"}}, {"take", {"took", "taken"}},
        {"teach", {"taught", "taught"}},   {"tell", {"told", "told"}},       {"throw", {"threw", "thrown"}},
        {"write", {"wrote", "written"}},   {"make", {"made", "made"}},       {"have", {"had", "had"}},
        {"put", {"put", "put"}},           {"get", {"got", "gotten"}},       {"swim", {"swam", "swum"}},
    };
    return table;
}

// Stems whose final consonant doubles before -ed/-ing.
const std::set<std::string>& doubling() {
    static const std::set<std::string> s = {"ship", "drip", "flip", "wrap", "cram", "transfer",
                                            "stop", "drop", "plan", "slip", "swim", "trip"};
    return s;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

std::string regular_ed(const std::string& l) {
    if (doubling().count(l)) return l + l.back() + "ed";
    if (!l.empty() && l.back() == 'e') return l + "d";
    if (l.size() >= 2 && l.back() == 'y' && !is_vowel(l[l.size() - 2])) return l.substr(0, l.size() - 1) + "ied";
    return l + "ed";
}

}  // namespace

std::string past_tense(std::string_view lemma) {
    const std::string l(lemma);
    if (auto it = irregulars().find(l); it != irregulars().end()) return it->second.past;
    return regular_ed(l);
}

std::vector<std::string> verb_forms(std::string_view lemma) {
    const std::string l(lemma);
    std::vector<std::string> forms{l};
    const auto add = [&](std::string f) {
        if (std::find(forms.begin(), forms.end(), f) == forms.end()) forms.push_back(std::move(f));
    };
    // 3sg
    if (l.ends_with("s") || l.ends_with("sh") || l.ends_with("ch") || l.ends_with("x") || l.ends_with("z")) {
        add(l + "es");
    } else if (l.size() >= 2 && l.back() == 'y' && !is_vowel(l[l.size() - 2])) {
        add(l.substr(0, l.size() - 1) + "ies");
    } else {
        add(l + "s");
    }
    if (auto it = irregulars().find(l); it != irregulars().end()) {
        add(it->second.past);
        add(it->second.participle);
    } else {
        add(regular_ed(l));
    }
    // gerund
    if (doubling().count(l)) {
        add(l + l.back() + "ing");
    } else if (l.size() >= 2 && l.back() == 'e' && l[l.size() - 2] != 'e') {
        add(l.substr(0, l.size() - 1) + "ing");
    } else {
        add(l + "ing");
    }
    return forms;
}

namespace {

// Index of the (single) verb token among the punctuation-stripped, lowercased words.
std::vector<std::size_t> verb_positions(const std::vector<std::string>& words, std::string_view lemma) {
    const auto forms = verb_forms(lemma);
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (std::find(forms.begin(), forms.end(), words[i]) != forms.end()) pos.push_back(i);
    }
    return pos;
}

std::vector<std::string> normalized_words(std::string_view s) {
    std::vector<std::string> out;
    for (const auto& w : text::split_whitespace(s)) {
        auto p = text::strip_punct(w);
        if (!p.empty()) out.push_back(std::move(p));
    }
    return out;
}

std::string join(const std::vector<std::string>& w, std::size_t from, std::size_t to) {
    std::string out;
    for (std::size_t i = from; i < to && i < w.size(); ++i) {
        if (!out.empty()) out += ' ';
        out += w[i];
    }
    return out;
}

}  // namespace

void derive_roles(const VerbEntry& entry, FrameTemplate& frame) {
    const auto& a_text =
        entry.conventional_variant == Variant::A ? frame.conventional_text : frame.unconventional_text;
    const auto& b_text =
        entry.conventional_variant == Variant::A ? frame.unconventional_text : frame.conventional_text;
    const auto a = normalized_words(a_text);
    const auto b = normalized_words(b_text);
    std::vector<std::string> a_lower, b_lower;
    for (const auto& w : a) a_lower.push_back(text::to_lower(w));
    for (const auto& w : b) b_lower.push_back(text::to_lower(w));
    const auto va = verb_positions(a_lower, entry.lemma);
    const auto vb = verb_positions(b_lower, entry.lemma);
    if (va.size() != 1 || vb.size() != 1) return;

    const auto find_prep = [&](const std::vector<std::string>& w, std::size_t after,
                               std::initializer_list<std::string_view> preps) -> std::size_t {
        for (std::size_t i = after + 1; i < w.size(); ++i) {
            for (auto p : preps) {
                if (w[i] == p) return i;
            }
        }
        return w.size();
    };

    switch (entry.construction) {
        case Construction::Dative: {
            const auto v = va[0];
            const auto p = find_prep(a_lower, v, {"to", "for"});
            if (p == a.size()) return;
            frame.subject = join(a, 0, v);
            frame.theme = join(a, v + 1, p);
            frame.recipient_or_goal = join(a, p + 1, a.size());
            break;
        }
        case Construction::Causative: {
            // transitive (B): causer V theme ...; intransitive (A): theme V ...
            frame.subject = join(b, 0, vb[0]);
            frame.theme = join(a, 0, va[0]);
            break;
        }
        case Construction::Locative: {
            const auto v = va[0];
            const auto p = find_prep(a_lower, v, {"onto", "into", "on", "in"});
            if (p == a.size()) return;
            frame.subject = join(a, 0, v);
            frame.theme = join(a, v + 1, p);
            frame.recipient_or_goal = join(a, p + 1, a.size());
            break;
        }
    }
}

// ---------------------------------------------------------------------------
// Control validation

namespace {

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

ValidationReport validate_controls(const StimulusSet& set) {
    ValidationReport report;
    std::vector<double> all_lengths;
    const auto check_verb = [](const VerbEntry& e, const std::string& sentence, int frame,
                               std::vector<ControlViolation>& out, bool& tense_ok) {
        std::vector<std::string> words;
        for (const auto& w : normalized_words(sentence)) words.push_back(text::to_lower(w));
        const auto pos = verb_positions(words, e.lemma);
        if (pos.size() != 1) {
            out.push_back({e.lemma, e.construction, frame, ControlViolation::Kind::VerbCount,
                           "verb occurs " + std::to_string(pos.size()) + " times in \"" + sentence + "\""});
            return;
        }
        if (words[pos[0]] != past_tense(e.lemma)) {
            tense_ok = false;
            out.push_back({e.lemma, e.construction, frame, ControlViolation::Kind::TenseMismatch,
                           "verb form '" + words[pos[0]] + "' is not simple past"});
        }
    };

    for (const auto& e : set) {
        VerbValidation vv;
        vv.lemma = e.lemma;
        vv.construction = e.construction;
        std::vector<double> lengths;
        for (std::size_t i = 0; i < kFramesPerVerb; ++i) {
            const auto& f = e.frames[i];
            FrameCheck fc;
            fc.frame_index = static_cast<int>(i);
            fc.conventional_words = text::word_count(f.conventional_text);
            fc.unconventional_words = text::word_count(f.unconventional_text);
            if (std::abs(fc.delta()) > kMaxWordDelta) {
                report.violations.push_back(
                    {e.lemma, e.construction, fc.frame_index, ControlViolation::Kind::LengthMismatch,
                     std::to_string(fc.conventional_words) + " vs " + std::to_string(fc.unconventional_words) +
                         " words"});
            }
            check_verb(e, f.conventional_text, fc.frame_index, report.violations, vv.tense_uniform);
            check_verb(e, f.unconventional_text, fc.frame_index, report.violations, vv.tense_uniform);
            lengths.push_back(fc.conventional_words);
            lengths.push_back(fc.unconventional_words);
            vv.frames.push_back(fc);
        }
        vv.mean_length = mean_of(lengths);
        vv.sd_length = sd_of(lengths);
        all_lengths.insert(all_lengths.end(), lengths.begin(), lengths.end());
        report.verbs.push_back(std::move(vv));
    }
    report.sentences = all_lengths.size();
    report.mean_length = mean_of(all_lengths);
    report.sd_length = sd_of(all_lengths);
    return report;
}

}  // namespace preempt
