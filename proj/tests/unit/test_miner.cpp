#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "noisy.hpp"
#include "preempt/agreement.hpp"
#include "preempt/error.hpp"
#include "preempt/miner.hpp"
#include "support.hpp"

using namespace preempt;
using testing::parse_spec;

namespace {

const AnimacyLexicon& lexicon() {
    static const AnimacyLexicon lex = AnimacyLexicon::load(testing::data_path("animate_nouns.txt"));
    return lex;
}

const VerbEntry& entry(const std::string& lemma, Construction c) {
    const auto* e = testing::bundled_stimuli().find(lemma, c);
    REQUIRE(e != nullptr);
    return *e;
}

std::vector<ParsedSentence> gold_corpus() {
    std::ifstream in(testing::data_path("gold/gold40.conllu"));
    REQUIRE(in);
    return read_conllu_strict(in, "gold40.conllu");
}

GoldLabel to_gold(const ConstructionLabel& l) {
    switch (l.kind) {
        case ConstructionLabel::Kind::Conv: return GoldLabel::Conv;
        case ConstructionLabel::Kind::Unconv: return GoldLabel::Unconv;
        case ConstructionLabel::Kind::Reject: return GoldLabel::Reject;
    }
    return GoldLabel::Reject;
}

}  // namespace

TEST_CASE("worked dative examples") {
    const auto pd = parse_spec(
        "She she PRON 2 nsubj | donated donate VERB 0 ROOT | the the DET 4 det | books book NOUN 2 dobj | "
        "to to ADP 2 prep | the the DET 7 det | library library NOUN 5 pobj | . . PUNCT 2 punct");
    const auto l = classify(pd, entry("donate", Construction::Dative), lexicon());
    CHECK(l.kind == ConstructionLabel::Kind::Conv);
    CHECK(l.variant == Variant::A);

    const auto dod = parse_spec(
        "She she PRON 2 nsubj | gave give VERB 0 ROOT | the the DET 4 det | library library NOUN 2 dative | "
        "the the DET 6 det | books book NOUN 2 dobj | . . PUNCT 2 punct");
    const auto d = classify(dod, entry("give", Construction::Dative), lexicon());
    CHECK(d.kind == ConstructionLabel::Kind::Unconv);
    CHECK(d.variant == Variant::B);
}

TEST_CASE("underspecified double object needs an animate first NP") {
    const auto animate = parse_spec(
        "He he PRON 2 nsubj | handed hand VERB 0 ROOT | the the DET 4 det | boy boy NOUN 2 dobj | "
        "a a DET 6 det | book book NOUN 2 npadvmod | . . PUNCT 2 punct");
    CHECK(classify(animate, entry("hand", Construction::Dative), lexicon()).variant == Variant::B);
    const auto inanimate = parse_spec(
        "He he PRON 2 nsubj | handed hand VERB 0 ROOT | the the DET 4 det | table table NOUN 2 dobj | "
        "a a DET 6 det | book book NOUN 2 npadvmod | . . PUNCT 2 punct");
    CHECK(classify(inanimate, entry("hand", Construction::Dative), lexicon()).reason == RejectReason::NoPatternMatch);
    const auto pronoun = parse_spec(
        "He he PRON 2 nsubj | handed hand VERB 0 ROOT | her she PRON 2 dobj | "
        "a a DET 5 det | book book NOUN 2 npadvmod | . . PUNCT 2 punct");
    CHECK(classify(pronoun, entry("hand", Construction::Dative), lexicon()).variant == Variant::B);
}

TEST_CASE("worked causative examples") {
    const auto& brk = entry("break", Construction::Causative);
    const auto trans = parse_spec(
        "The the DET 2 det | wind wind NOUN 3 nsubj | broke break VERB 0 ROOT | the the DET 5 det | "
        "window window NOUN 3 dobj | . . PUNCT 3 punct");
    CHECK(classify(trans, brk, lexicon()).kind == ConstructionLabel::Kind::Unconv);
    const auto intrans =
        parse_spec("The the DET 2 det | window window NOUN 3 nsubj | broke break VERB 0 ROOT | . . PUNCT 3 punct");
    CHECK(classify(intrans, brk, lexicon()).kind == ConstructionLabel::Kind::Conv);
    const auto peri = parse_spec(
        "The the DET 2 det | storm storm NOUN 3 nsubj | made make VERB 0 ROOT | the the DET 5 det | "
        "window window NOUN 6 nsubj | break break VERB 3 ccomp | . . PUNCT 3 punct");
    const auto p = classify(peri, brk, lexicon());
    CHECK(p.is_reject());
    CHECK(p.reason == RejectReason::Periphrastic);
}

TEST_CASE("worked locative examples") {
    const auto content = parse_spec(
        "She she PRON 2 nsubj | poured pour VERB 0 ROOT | water water NOUN 2 dobj | into into ADP 2 prep | "
        "the the DET 6 det | glass glass NOUN 4 pobj | . . PUNCT 2 punct");
    CHECK(classify(content, entry("pour", Construction::Locative), lexicon()).kind == ConstructionLabel::Kind::Conv);
    const auto container = parse_spec(
        "She she PRON 2 nsubj | filled fill VERB 0 ROOT | the the DET 4 det | glass glass NOUN 2 dobj | "
        "with with ADP 2 prep | water water NOUN 5 pobj | . . PUNCT 2 punct");
    const auto c = classify(container, entry("fill", Construction::Locative), lexicon());
    CHECK_FALSE(c.is_reject());
    CHECK(c.variant == Variant::B);
    const auto single =
        parse_spec("She she PRON 2 nsubj | poured pour VERB 0 ROOT | water water NOUN 2 dobj | . . PUNCT 2 punct");
    CHECK(classify(single, entry("pour", Construction::Locative), lexicon()).reason == RejectReason::SingleArgument);
}

TEST_CASE("filters apply in order: boilerplate, length, POS, confidence") {
    auto s = parse_spec("Give give VERB 0 ROOT | it it PRON 1 dobj | . . PUNCT 1 punct");
    CHECK(filter_sentence(s, "give") == RejectReason::TooShort);
    s.boilerplate = true;
    CHECK(filter_sentence(s, "give") == RejectReason::Boilerplate);

    auto t = parse_spec("The the DET 2 det | drive drive NOUN 3 nsubj | was be AUX 0 ROOT | long long ADJ 3 acomp");
    t.parse_confidence = 0.1;
    CHECK(filter_sentence(t, "drive") == RejectReason::PosMismatch);
    t.tokens[1].upos = "VERB";
    CHECK(filter_sentence(t, "drive") == RejectReason::LowConfidence);
    t.parse_confidence = 0.75;
    CHECK_FALSE(filter_sentence(t, "drive").has_value());

    FilterConfig tight;
    tight.max_tokens = 3;
    CHECK(filter_sentence(t, "drive", tight) == RejectReason::TooLong);
    CHECK_THROWS_AS(filter_sentence(t, "give"), InputError);
}

TEST_CASE("gold mini-corpus: 100% agreement with annotator labels") {
    const auto corpus = gold_corpus();
    REQUIRE(corpus.size() == 40);
    std::vector<LabeledSentence> predicted, gold;
    for (const auto& s : corpus) {
        const auto cx = parse_construction(s.metadata.at("construction"));
        REQUIRE(cx);
        const auto& e = entry(s.metadata.at("verb"), *cx);
        const auto label = classify(s, e, lexicon());
        const auto expected = parse_gold_label(s.metadata.at("gold"));
        INFO(s.id);
        CHECK(to_gold(label) == expected);
        if (expected == GoldLabel::Reject) {
            CHECK(column_name(label.reason) == s.metadata.at("gold_reason"));
        }
        predicted.push_back({s.id, *cx, to_gold(label)});
        gold.push_back({s.id, *cx, expected});
    }
    const auto v = validate_against_gold(predicted, gold);
    CHECK(v.overall.precision() == 1.0);
    CHECK(v.kappa == doctest::Approx(1.0));
}

TEST_CASE("gold mini-corpus: scanner tallies equal the annotated counts") {
    const CorpusScanner scanner(testing::bundled_stimuli(), lexicon());
    const auto table = scanner.scan(gold_corpus(), "gold40");
    const auto expected = load_frequency_csv(testing::data_path("gold/gold40_counts.csv"));
    for (const auto& [key, cell] : table.cells()) {
        const auto* want = expected.find(key.first, key.second);
        INFO(key.first << " " << to_string(key.second));
        if (want == nullptr) {
            CHECK(cell == FrequencyCell{});
        } else {
            CHECK(cell == *want);
        }
    }
    for (const auto& [key, cell] : expected.cells()) CHECK(table.find(key.first, key.second) != nullptr);
    CHECK(table.sentences_seen() == 40);
    CHECK(table.tallied() == table.sentences_seen());
}

TEST_CASE("planted-noise corpus: precision tracks the planted error share") {
    testing::NoisyConfig cfg;
    const auto items = testing::noisy_corpus(testing::bundled_stimuli(), cfg);
    std::size_t predicted = 0, correct = 0, planted = 0;
    for (const auto& it : items) {
        const auto label = classify(it.sentence, *it.entry, lexicon());
        if (label.is_reject()) {
            CHECK_FALSE(it.planted_error);
            CHECK(it.gold == GoldLabel::Reject);
            continue;
        }
        ++predicted;
        planted += it.planted_error;
        correct += to_gold(label) == it.gold;
    }
    // every clean match is right and every planted error is wrong
    CHECK(correct + planted == predicted);
    const double precision = static_cast<double>(correct) / static_cast<double>(predicted);
    CHECK(std::abs(precision - 0.95) <= 0.02);
}

TEST_CASE("frequency tables: conservation and merge laws") {
    const auto& stimuli = testing::bundled_stimuli();
    const CorpusScanner scanner(stimuli, lexicon());
    const auto items = testing::noisy_corpus(stimuli, {600, 0.05, 0.2, 5});
    std::vector<ParsedSentence> sentences;
    for (const auto& it : items) sentences.push_back(it.sentence);
    sentences.push_back(parse_spec("The the DET 2 det | cat cat NOUN 3 nsubj | sat sit VERB 0 ROOT | . . PUNCT 3 punct"));
    ParsedSentence broken = sentences.front();
    broken.tokens[0].head = 99;
    sentences.push_back(broken);

    const auto whole = scanner.scan(sentences, "whole");
    CHECK(whole.sentences_seen() == sentences.size());
    CHECK(whole.tallied() == whole.sentences_seen());
    CHECK(whole.untargeted() == 1);
    CHECK(whole.parse_errors() == 1);

    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        auto shuffled = sentences;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const auto cut1 = rng() % shuffled.size();
        const auto cut2 = cut1 + rng() % (shuffled.size() - cut1);
        const std::vector<ParsedSentence> a(shuffled.begin(), shuffled.begin() + static_cast<long>(cut1));
        const std::vector<ParsedSentence> b(shuffled.begin() + static_cast<long>(cut1),
                                            shuffled.begin() + static_cast<long>(cut2));
        const std::vector<ParsedSentence> c(shuffled.begin() + static_cast<long>(cut2), shuffled.end());
        const auto ta = scanner.scan(a, "a"), tb = scanner.scan(b, "b"), tc = scanner.scan(c, "c");
        const auto left = merge(merge(ta, tb), tc);
        const auto right = merge(ta, merge(tc, tb));
        CHECK(left == right);
        CHECK(left.cells() == whole.cells());
        CHECK(left.sentences_seen() == whole.sentences_seen());
        CHECK(left.corpus_id() == "a+b+c");
    }
}

TEST_CASE("frequency CSV round-trips and rejects bad rows") {
    const CorpusScanner scanner(testing::bundled_stimuli(), lexicon());
    const auto table = scanner.scan(gold_corpus(), "gold40");
    std::ostringstream out;
    write_frequency_csv(out, table);
    std::istringstream in(out.str());
    const auto back = read_frequency_csv(in);
    CHECK(back.cells() == table.cells());

    std::istringstream bad("lemma,construction,f_conv,f_unconv\ngive,Dative,3,x\n");
    try {
        read_frequency_csv(bad, "f.csv");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    std::istringstream dup("lemma,construction,f_conv,f_unconv\ngive,Dative,3,1\ngive,Dative,1,1\n");
    CHECK_THROWS_AS(read_frequency_csv(dup), ParseError);
    CHECK(frequency_summary_json(table).find("\"give\"") != std::string::npos);
}

TEST_CASE("parallel file scan equals the sequential scan") {
    const auto& stimuli = testing::bundled_stimuli();
    const CorpusScanner scanner(stimuli, lexicon());
    const auto items = testing::noisy_corpus(stimuli, {400, 0.05, 0.2, 8});
    std::vector<std::string> paths;
    std::vector<ParsedSentence> all;
    for (int f = 0; f < 4; ++f) {
        const auto path = std::string("scan_part_") + std::to_string(f) + ".conllu";
        std::ofstream out(path);
        for (std::size_t i = static_cast<std::size_t>(f); i < items.size(); i += 4) {
            write_conllu(out, items[i].sentence);
            all.push_back(items[i].sentence);
        }
        paths.push_back(path);
    }
    const auto parallel = scanner.scan_files(paths, 3);
    const auto sequential = scanner.scan(all);
    CHECK(parallel.cells() == sequential.cells());
    CHECK(parallel.sentences_seen() == sequential.sentences_seen());
    for (const auto& p : paths) std::remove(p.c_str());
    CHECK_THROWS_AS(scanner.scan_files({"does/not/exist.conllu"}, 1), InputError);
}
