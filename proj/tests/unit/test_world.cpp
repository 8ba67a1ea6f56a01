#include <cmath>

#include "doctest.h"
#include "preempt/scores.hpp"
#include "preempt/stats/correlation.hpp"
#include "preempt/stats/descriptive.hpp"
#include "preempt/stats/tests.hpp"
#include "support.hpp"
#include "world.hpp"

using namespace preempt;
using namespace preempt::testing;

namespace {

const World& world() {
    static const World w = [] {
        const auto animacy = AnimacyLexicon::load(data_path("animate_nouns.txt"));
        return build_world(bundled_stimuli(), animacy);
    }();
    return w;
}

}  // namespace

TEST_CASE("the miner recovers the planted shares") {
    const auto& w = world();
    const WorldConfig cfg;
    REQUIRE(w.stimuli.size() >= 30);
    CHECK(w.freq.tallied() == w.freq.sentences_seen());
    CHECK(w.freq.sentences_seen() == w.corpus.size());
    CHECK(w.freq.untargeted() == cfg.filler_sentences);
    CHECK(w.freq.parse_errors() == 0);
    for (const auto& e : w.stimuli) {
        const auto* c = w.freq.find(e.lemma, Construction::Dative);
        REQUIRE(c != nullptr);
        INFO(e.lemma);
        CHECK(c->classified() == cfg.sentences_per_verb);
        CHECK(c->rejected() == 0);
        // binomial draw against the planted share, 4 standard errors
        const double n = static_cast<double>(cfg.sentences_per_verb);
        const double p = w.planted_share.at(e.lemma);
        CHECK(std::fabs(static_cast<double>(c->f_conv) / n - p) <= 4 * std::sqrt(p * (1 - p) / n));
    }
}

TEST_CASE("category means of delta S are ordered Strong > Weak > None") {
    const auto& w = world();
    std::map<Category, std::vector<double>> by;
    for (const auto& d : w.deltas) by[w.stimuli.find(d.verb, Construction::Dative)->category].push_back(d.delta_s);
    REQUIRE(by.size() == 3);
    const double s = stats::mean(by[Category::Strong]);
    const double k = stats::mean(by[Category::Weak]);
    const double n = stats::mean(by[Category::None]);
    INFO("Strong " << s << ", Weak " << k << ", None " << n);
    CHECK(s > k);
    CHECK(k > n);
}

TEST_CASE("preemption score and delta S are positively rank correlated") {
    const auto& w = world();
    std::vector<double> p, d;
    for (const auto& v : w.deltas) {
        const auto* c = w.freq.find(v.verb, Construction::Dative);
        p.push_back(preempt_score(c->f_conv, c->f_unconv));
        d.push_back(v.delta_s);
    }
    const double rho = stats::spearman_rho(p, d);
    INFO("rho = " << rho);
    CHECK(rho > 0.0);
}

TEST_CASE("frequency-matched competing split favours +Competing") {
    const auto& w = world();
    std::vector<double> plus, minus;
    for (const auto& v : w.deltas) {
        const auto comp = w.stimuli.find(v.verb, Construction::Dative)->competing;
        if (comp == Competing::PlusCompeting) plus.push_back(v.delta_s);
        if (comp == Competing::MinusCompeting) minus.push_back(v.delta_s);
    }
    REQUIRE(plus.size() >= 2);
    REQUIRE(minus.size() >= 2);
    // every verb has the same number of corpus sentences, so the groups are frequency matched
    const double d = stats::cohens_d(plus, minus);
    INFO("d = " << d);
    CHECK(d > 0.0);
}

TEST_CASE("the world is reproducible") {
    const auto animacy = AnimacyLexicon::load(data_path("animate_nouns.txt"));
    WorldConfig cfg;
    cfg.sentences_per_verb = 20;
    cfg.filler_sentences = 50;
    const auto a = build_world(bundled_stimuli(), animacy, cfg);
    const auto b = build_world(bundled_stimuli(), animacy, cfg);
    REQUIRE(a.deltas.size() == b.deltas.size());
    for (std::size_t i = 0; i < a.deltas.size(); ++i) CHECK(a.deltas[i].delta_s == b.deltas[i].delta_s);
    CHECK(a.freq == b.freq);
}
