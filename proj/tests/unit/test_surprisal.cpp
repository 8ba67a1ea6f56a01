#include <cmath>
#include <sstream>

#include "doctest.h"
#include "preempt/error.hpp"
#include "preempt/surprisal.hpp"
#include "support.hpp"

using namespace preempt;

namespace {

std::string line(const std::string& verb, int frame, const std::string& variant, const std::string& logprobs,
                 const std::string& condition = "null", int words = 2) {
    return R"({"verb":")" + verb + R"(","construction":"Dative","frame":)" + std::to_string(frame) +
           R"(,"variant":")" + variant + R"(","condition":)" + condition + R"(,"words":)" + std::to_string(words) +
           R"(,"tokens":["a","b"],"logprobs":)" + logprobs + R"(,"model_id":"m"})";
}

}  // namespace

TEST_CASE("natural-log probabilities become bits per word") {
    const auto s = make_sentence_surprisal({"give", Construction::Dative, 0, SurfaceRole::Conv, std::nullopt}, "m",
                                           {"a", "b", "c"}, {-std::log(2.0), -std::log(4.0), -std::log(8.0)}, 2);
    CHECK(s.total_bits == doctest::Approx(6.0));
    CHECK(s.bits_per_word == doctest::Approx(3.0));
    const std::vector<TokenScore> toks{{"a", -std::log(2.0)}, {"b", -std::log(2.0)}};
    CHECK(mean_surprisal(toks, 1) == doctest::Approx(2.0));
    CHECK_THROWS_AS(mean_surprisal(toks, 0), InputError);
}

TEST_CASE("record validation") {
    const ScoreKey k{"give", Construction::Dative, 0, SurfaceRole::Conv, std::nullopt};
    CHECK_THROWS_AS(make_sentence_surprisal(k, "m", {"a"}, {0.1}, 1), InputError);
    CHECK_THROWS_AS(make_sentence_surprisal(k, "m", {"a", "b"}, {-1.0}, 1), InputError);
    CHECK_THROWS_AS(make_sentence_surprisal(k, "m", {"a"}, {-1.0}, 0), InputError);
    CHECK_THROWS_AS(make_sentence_surprisal(k, "m", {"a"}, {-INFINITY}, 1), InputError);
}

TEST_CASE("JSONL ingest round-trips and reports line numbers") {
    std::istringstream in(line("give", 0, "conv", "[-1.0,-2.0]") + "\n\n" +
                          line("give", 0, "unconv", "[-2.0,-2.5]", "\"Amplified\"") + "\n");
    const auto set = parse_scores(in, "s.jsonl");
    REQUIRE(set.size() == 2);
    CHECK(set.records()[1].key.condition == std::optional<std::string>("Amplified"));
    CHECK(set.model_ids() == std::set<std::string>{"m"});
    std::ostringstream out;
    write_scores(out, set);
    std::istringstream again(out.str());
    CHECK(parse_scores(again) == set);

    std::istringstream bad(line("give", 0, "conv", "[-1.0,-2.0]") + "\n" + line("give", 0, "sideways", "[-1,-1]") +
                           "\n");
    try {
        parse_scores(bad, "s.jsonl");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    std::istringstream dup(line("give", 0, "conv", "[-1.0,-2.0]") + "\n" + line("give", 0, "conv", "[-1,-1]") + "\n");
    CHECK_THROWS_AS(parse_scores(dup), ParseError);
    std::istringstream notjson("{oops\n");
    CHECK_THROWS_AS(parse_scores(notjson), ParseError);
}

TEST_CASE("delta S averages frames and checks alignment") {
    ScoreSet set;
    testing::add_verb_scores(set, "m", "give", Construction::Dative, 0.8);
    std::vector<SentenceSurprisal> conv, unconv;
    for (const auto& r : set.records()) (r.key.variant == SurfaceRole::Conv ? conv : unconv).push_back(r);
    const auto d = delta_s(conv, unconv);
    CHECK(d.delta_s == doctest::Approx(0.8));
    CHECK(d.n_frames == 5);
    CHECK(d.conv_mean == doctest::Approx(4.5));
    unconv.pop_back();
    CHECK_THROWS_AS(delta_s(conv, unconv), InputError);
}

TEST_CASE("compute_deltas lists every absent key") {
    const auto two = testing::subset(testing::bundled_stimuli(), [](const VerbEntry& e) {
        return e.construction == Construction::Dative && (e.lemma == "give" || e.lemma == "send");
    });
    ScoreSet set;
    testing::add_verb_scores(set, "m", "give", Construction::Dative, 0.5);
    try {
        compute_deltas(set, two, "m");
        FAIL("expected InputError");
    } catch (const InputError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("send") != std::string::npos);
        CHECK(msg.find("give") == std::string::npos);
    }
    testing::add_verb_scores(set, "m", "send", Construction::Dative, 0.3);
    const auto deltas = compute_deltas(set, two, "m");
    REQUIRE(deltas.size() == 2);
    CHECK_THROWS_AS(compute_deltas(set, two, "m", std::string("Amplified")), InputError);
}

TEST_CASE("SLOR subtracts unigram log-probability per word") {
    const auto s = make_sentence_surprisal({"give", Construction::Dative, 0, SurfaceRole::Conv, std::nullopt}, "m",
                                           {"a", "b"}, {-1.0, -2.0}, 2);
    const std::vector<double> uni{-3.0, -4.0};
    CHECK(slor(s, uni) == doctest::Approx((-3.0 + 7.0) / (kLn2 * 2)));
    const std::vector<double> short_uni{-3.0};
    CHECK_THROWS_AS(slor(s, short_uni), InputError);
}
