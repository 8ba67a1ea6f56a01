#include "world.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <set>

#include "preempt/text.hpp"

namespace preempt::testing {

namespace {

const std::set<std::string> kDeterminers = {"the", "a", "an", "his", "her", "their", "my", "our", "its", "your",
                                            "this", "that", "some", "every"};

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Appends an NP whose last word is the head; returns the head's 1-based index.
int append_np(ParsedSentence& s, const std::string& np, int head, const std::string& deprel) {
    const auto words = text::split_whitespace(np);
    const int first = static_cast<int>(s.tokens.size()) + 1;
    const int h = first + static_cast<int>(words.size()) - 1;
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto lower = text::to_lower(words[i]);
        const bool is_head = first + static_cast<int>(i) == h;
        std::string upos = "NOUN";
        if (!is_head) {
            upos = kDeterminers.count(lower) ? "DET" : "ADJ";
        } else if (lower == "she" || lower == "he" || lower == "they" || lower == "we" || lower == "i" ||
                   lower == "you" || lower == "them" || lower == "him" || lower == "us" || lower == "me") {
            upos = "PRON";
        } else if (std::isupper(static_cast<unsigned char>(words[i][0])) && first + static_cast<int>(i) > 1) {
            upos = "PROPN";
        }
        const std::string rel = is_head ? deprel : (upos == "DET" ? "det" : "amod");
        s.tokens.push_back({words[i], lower, upos, is_head ? head : h, rel});
    }
    return h;
}

std::vector<std::string> words_of(const ParsedSentence& s) {
    std::vector<std::string> out;
    for (const auto& t : s.tokens) out.push_back(text::to_lower(t.form));
    return out;
}

}  // namespace

double planted_share(const WorldConfig& cfg, Category c) {
    switch (c) {
        case Category::Strong: return cfg.strong_share;
        case Category::Weak: return cfg.weak_share;
        case Category::None: return cfg.none_share;
    }
    return cfg.none_share;
}

ParsedSentence dative_sentence(const std::string& subject, const std::string& verb_past, const std::string& lemma,
                               const std::string& theme, const std::string& recipient, Variant frame,
                               const std::string& id) {
    ParsedSentence s;
    s.id = id;
    const auto n_subj = text::split_whitespace(subject).size();
    const int verb_index = static_cast<int>(n_subj) + 1;
    append_np(s, subject, verb_index, "nsubj");
    s.tokens.push_back({verb_past, lemma, "VERB", 0, "ROOT"});
    if (frame == Variant::A) {
        append_np(s, theme, verb_index, "dobj");
        s.tokens.push_back({"to", "to", "ADP", verb_index, "prep"});
        const int prep = static_cast<int>(s.tokens.size());
        append_np(s, recipient, prep, "pobj");
    } else {
        append_np(s, recipient, verb_index, "dative");
        append_np(s, theme, verb_index, "dobj");
    }
    s.tokens.push_back({".", ".", "PUNCT", verb_index, "punct"});
    for (const auto& t : s.tokens) s.text += (s.text.empty() ? "" : " ") + t.form;
    return s;
}

World build_world(const StimulusSet& all, const AnimacyLexicon& animacy, const WorldConfig& cfg) {
    World w;
    for (const auto& e : all) {
        if (e.construction != Construction::Dative) continue;
        bool usable = true;
        for (const auto& f : e.frames) {
            usable = usable && !f.subject.empty() && !f.theme.empty() && !f.recipient_or_goal.empty();
        }
        if (usable) w.stimuli.add(e);
    }

    std::mt19937_64 rng(cfg.seed);
    std::size_t next_id = 0;
    for (const auto& e : w.stimuli) {
        const double share = planted_share(cfg, e.category);
        w.planted_share[e.lemma] = share;
        const auto past = past_tense(e.lemma);
        for (std::size_t i = 0; i < cfg.sentences_per_verb; ++i) {
            const auto& subj_frame = e.frames[rng() % kFramesPerVerb];
            const auto& obj_frame = e.frames[rng() % kFramesPerVerb];
            const bool conventional = uniform01(rng) < share;
            const Variant frame = conventional ? e.conventional_variant : e.unconventional_variant();
            w.corpus.push_back(dative_sentence(subj_frame.subject, past, e.lemma, obj_frame.theme,
                                               obj_frame.recipient_or_goal, frame, "w" + std::to_string(next_id++)));
        }
    }
    // filler with non-stimulus verbs, so lower orders see other continuations
    static const std::vector<std::string> kFillerVerbs = {"bought", "found", "painted", "cleaned", "watched"};
    static const std::vector<std::string> kFillerLemmas = {"buy", "find", "paint", "clean", "watch"};
    for (std::size_t i = 0; i < cfg.filler_sentences; ++i) {
        const auto& e = w.stimuli.entries()[rng() % w.stimuli.size()];
        const auto& f = e.frames[rng() % kFramesPerVerb];
        const auto k = rng() % kFillerVerbs.size();
        ParsedSentence s;
        s.id = "f" + std::to_string(i);
        const int v = static_cast<int>(text::split_whitespace(f.subject).size()) + 1;
        append_np(s, f.subject, v, "nsubj");
        s.tokens.push_back({kFillerVerbs[k], kFillerLemmas[k], "VERB", 0, "ROOT"});
        append_np(s, f.theme, v, "dobj");
        s.tokens.push_back({".", ".", "PUNCT", v, "punct"});
        w.corpus.push_back(std::move(s));
    }
    std::shuffle(w.corpus.begin(), w.corpus.end(), rng);

    for (const auto& s : w.corpus) w.lm_corpus.push_back(words_of(s));
    CorpusScanner scanner(w.stimuli, animacy);
    w.freq = scanner.scan(w.corpus, "synthetic-world");
    w.lm = NgramModel::train(w.lm_corpus, cfg.order);
    w.scores = score_stimuli(w.lm, w.stimuli, "kn5-world");
    w.deltas = compute_deltas(w.scores, w.stimuli, "kn5-world");
    return w;
}

}  // namespace preempt::testing
