#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "preempt/error.hpp"
#include "preempt/experiments.hpp"
#include "preempt/scores.hpp"
#include "preempt/stats/correlation.hpp"
#include "preempt/stats/tests.hpp"
#include "support.hpp"

using namespace preempt;
using testing::bundled_stimuli;

namespace {

ExperimentOptions fast() {
    ExperimentOptions o;
    o.bootstrap = 500;
    o.permutations = 500;
    return o;
}

// Planted per-category samples with exact moments, consumed in stimulus order.
ScoreSet planted_scores(const StimulusSet& stim, const std::string& model,
                        const std::map<std::pair<Construction, Category>, std::pair<double, double>>& moments,
                        std::uint64_t seed) {
    std::map<std::pair<Construction, Category>, std::vector<double>> pools;
    std::map<std::pair<Construction, Category>, std::size_t> counts, used;
    for (const auto& e : stim) ++counts[{e.construction, e.category}];
    for (const auto& [k, n] : counts) {
        const auto it = moments.find(k);
        const auto [m, s] = it == moments.end() ? std::pair{1.0, 0.5} : it->second;
        pools[k] = testing::planted_sample(n, m, s, seed++);
    }
    ScoreSet set;
    for (const auto& e : stim) {
        const std::pair key{e.construction, e.category};
        testing::add_verb_scores(set, model, e.lemma, e.construction, pools[key][used[key]++]);
    }
    return set;
}

const std::map<std::pair<Construction, Category>, std::pair<double, double>> kPlantedMoments{
    {{Construction::Dative, Category::Strong}, {2.41, 0.89}},
    {{Construction::Dative, Category::Weak}, {1.12, 0.70}},
    {{Construction::Dative, Category::None}, {0.33, 0.51}},
    {{Construction::Causative, Category::Strong}, {1.90, 0.70}},
    {{Construction::Causative, Category::None}, {0.40, 0.60}},
    {{Construction::Locative, Category::Strong}, {1.10, 0.70}},
    {{Construction::Locative, Category::None}, {0.30, 0.60}},
};

// Dative frequencies giving every verb a distinct Preempt score and total.
FrequencyTable dative_freq(const StimulusSet& stim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    FrequencyTable f("planted");
    for (const auto& e : stim.of(Construction::Dative)) {
        auto& c = f.cell(e.lemma, Construction::Dative);
        c.f_conv = 5 + rng() % 400;
        c.f_unconv = 5 + rng() % 400;
    }
    return f;
}

}  // namespace

TEST_CASE("model resolution") {
    ScoreSet s;
    testing::add_verb_scores(s, "m1", "give", Construction::Dative, 1.0);
    CHECK(resolve_model(s, "") == "m1");
    CHECK(resolve_model(s, "m1") == "m1");
    CHECK_THROWS_AS(resolve_model(s, "m2"), InputError);
    testing::add_verb_scores(s, "m2", "give", Construction::Dative, 1.0);
    CHECK_THROWS_AS(resolve_model(s, ""), InputError);
    CHECK_THROWS_AS(resolve_model(ScoreSet{}, ""), InputError);
}

TEST_CASE("exp1 reproduces the human-rating correlation oracle") {
    const auto scores = ingest_scores(testing::data_path("fixtures/table10_scores.jsonl"));
    const auto human = load_human(testing::data_path("fixtures/table10_dais.tsv"), HumanRatings::Kind::DaisBias);
    std::ifstream oracle_in(testing::data_path("fixtures/table10_r_oracle.txt"));
    double oracle = 0;
    oracle_in >> oracle;
    REQUIRE(oracle > 0.99);

    const auto stim = testing::subset(bundled_stimuli(), [&](const VerbEntry& e) {
        return e.construction == Construction::Dative && human.values.count(e.lemma) > 0;
    });
    REQUIRE(stim.size() == 12);
    const auto deltas = compute_deltas(scores, stim, "llama-2-7b-table10");
    REQUIRE(deltas.size() == 12);
    const auto join = join_human(deltas, human);
    std::vector<double> ds, h;
    for (const auto& r : join.rows) {
        ds.push_back(r.delta_s);
        h.push_back(r.human);
    }
    CHECK(std::fabs(stats::pearson_r(ds, h) - oracle) <= 1e-6);

    // the full recipe reports the same value
    const auto res = run_exp1(scores, stim, &human, fast());
    REQUIRE(res.human.has_value());
    CHECK(std::fabs(res.human->r - oracle) <= 1e-6);
    CHECK(res.human->n == 12u);
    CHECK(res.report.find_test("exp1.human_r") != nullptr);
}

TEST_CASE("exp1 recovers planted category statistics") {
    const auto& stim = bundled_stimuli();
    const auto scores = planted_scores(stim, "llama", kPlantedMoments, 11);
    const auto res = run_exp1(scores, stim, nullptr, fast());
    CHECK(res.model_id == "llama");
    CHECK(res.deltas.size() == stim.size());
    const auto& s = res.dative.at(Category::Strong);
    const auto& n = res.dative.at(Category::None);
    CHECK(s.mean == doctest::Approx(2.41).epsilon(1e-9));
    CHECK(s.sd == doctest::Approx(0.89).epsilon(1e-9));
    CHECK(n.n == 27);
    CHECK(std::fabs(res.d_strong_none - 2.87) <= 0.01);
    const auto oracle_t = (2.41 - 0.33) / std::sqrt((26 * 0.89 * 0.89 + 26 * 0.51 * 0.51) / 52 * (2.0 / 27));
    CHECK(res.strong_vs_none.statistic == doctest::Approx(oracle_t).epsilon(1e-9));
    CHECK(res.strong_vs_none.df == 52);
    CHECK(res.report.find_test("exp1.strong_vs_none") != nullptr);
    CHECK(res.report.find_table("exp1_verbs")->rows.size() == stim.size());
    CHECK_FALSE(res.report.figures().empty());

    REQUIRE(res.ordering.has_value());
    CHECK(res.ordering->constructions ==
          std::vector<int>{static_cast<int>(Construction::Dative), static_cast<int>(Construction::Causative),
                           static_cast<int>(Construction::Locative)});
    CHECK(res.ordering->permutations == 500u);

    // every reported test carries a BH-adjusted p no smaller than its raw p
    for (const auto& t : res.report.tests()) CHECK(t.p_adjusted >= t.p);
}

TEST_CASE("exp1 is deterministic for a fixed seed") {
    const auto& stim = bundled_stimuli();
    const auto scores = planted_scores(stim, "m", kPlantedMoments, 3);
    const auto a = run_exp1(scores, stim, nullptr, fast());
    const auto b = run_exp1(scores, stim, nullptr, fast());
    CHECK(to_json(a.report) == to_json(b.report));
}

TEST_CASE("exp1 degenerate and incomplete inputs") {
    const auto& stim = bundled_stimuli();
    ScoreSet flat;
    for (const auto& e : stim) testing::add_verb_scores(flat, "m", e.lemma, e.construction, 1.0);
    CHECK_THROWS_AS(run_exp1(flat, stim, nullptr, fast()), DegenerateError);

    ScoreSet partial;
    testing::add_verb_scores(partial, "m", "give", Construction::Dative, 1.0);
    CHECK_THROWS_AS(run_exp1(partial, stim, nullptr, fast()), InputError);
}

TEST_CASE("exp2 recovers planted competing groups") {
    const auto& stim = bundled_stimuli();
    std::vector<const VerbEntry*> plus, minus;
    for (const auto& e : stim.of(Construction::Dative)) {
        if (e.competing == Competing::PlusCompeting) plus.push_back(stim.find(e.lemma, Construction::Dative));
        if (e.competing == Competing::MinusCompeting) minus.push_back(stim.find(e.lemma, Construction::Dative));
    }
    REQUIRE(plus.size() == 20);
    REQUIRE(minus.size() == 20);
    const auto p = testing::planted_sample(20, 2.36, 0.84, 5);
    const auto m = testing::planted_sample(20, 0.91, 0.68, 6);
    ScoreSet scores;
    std::size_t ip = 0, im = 0;
    for (const auto& e : stim.of(Construction::Dative)) {
        const double d = e.competing == Competing::PlusCompeting    ? p[ip++]
                         : e.competing == Competing::MinusCompeting ? m[im++]
                                                                    : 1.5;
        testing::add_verb_scores(scores, "llama", e.lemma, Construction::Dative, d);
    }
    const auto freq = dative_freq(stim, 4);
    const auto res = run_exp2(scores, freq, stim, nullptr, fast());
    CHECK(std::fabs(res.main.d - 1.91) <= 0.02);
    CHECK(std::fabs(res.main.t.statistic - 6.02) <= 0.1);
    CHECK(res.main.t.df == 38);
    CHECK(res.report.find_test("exp2.competing") != nullptr);
    CHECK(res.vif.size() == 2);
    CHECK(res.ols.beta.size() == 4);
    CHECK_FALSE(res.mixed.has_value());
}

TEST_CASE("exp2 partial correlations separate preemption from entrenchment") {
    const auto& stim = bundled_stimuli();
    const auto freq = dative_freq(stim, 8);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> z(0, 0.05);
    ScoreSet scores;
    std::vector<double> ds, pp, ee;
    for (const auto& e : stim.of(Construction::Dative)) {
        const auto* c = freq.find(e.lemma, Construction::Dative);
        const double pv = preempt_score(c->f_conv, c->f_unconv);
        const double d = 3.0 * pv + z(rng);
        testing::add_verb_scores(scores, "m", e.lemma, Construction::Dative, d);
    }
    const auto res = run_exp2(scores, freq, stim, nullptr, fast());
    for (const auto& row : res.report.find_table("exp2_verbs")->rows) {
        ds.push_back(std::get<double>(row[2]));
        pp.push_back(std::get<double>(row[3]));
        ee.push_back(std::get<double>(row[4]));
    }
    CHECK(res.main.partial_preempt == doctest::Approx(stats::partial_correlation(ds, pp, ee)).epsilon(1e-10));
    CHECK(res.main.partial_entrench == doctest::Approx(stats::partial_correlation(ds, ee, pp)).epsilon(1e-10));
    CHECK(res.main.partial_preempt > 0.9);
    CHECK(std::fabs(res.main.partial_entrench) < 0.3);
    CHECK(res.ols.beta[1] > 0);
}

TEST_CASE("exp2 edge cases") {
    const auto& stim = bundled_stimuli();
    ScoreSet scores;
    std::mt19937_64 rng(2);
    std::normal_distribution<double> z;
    for (const auto& e : stim.of(Construction::Dative))
        testing::add_verb_scores(scores, "m", e.lemma, Construction::Dative, 1 + z(rng));

    SUBCASE("identical preemption scores are degenerate") {
        FrequencyTable f;
        std::uint64_t k = 10;
        for (const auto& e : stim.of(Construction::Dative)) {
            f.cell(e.lemma, Construction::Dative) = {k, k, {}};
            ++k;
        }
        CHECK_THROWS_AS(run_exp2(scores, f, stim, nullptr, fast()), DegenerateError);
    }
    SUBCASE("missing frequency cells are input errors") {
        auto f = dative_freq(stim, 1);
        FrequencyTable g;
        for (const auto& [key, cell] : f.cells())
            if (key.first != "give") g.cell(key.first, key.second) = cell;
        try {
            run_exp2(scores, g, stim, nullptr, fast());
            FAIL("expected InputError");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find("give") != std::string::npos);
        }
    }
    SUBCASE("zero-frequency verbs are skipped with a note") {
        auto f = dative_freq(stim, 1);
        f.cell("give", Construction::Dative) = {};
        const auto res = run_exp2(scores, f, stim, nullptr, fast());
        CHECK(res.skipped_verbs == std::vector<std::string>{"give"});
        CHECK_FALSE(res.report.notes().empty());
    }
    SUBCASE("exclusion rerun and mixed model across models") {
        auto both = scores;
        std::normal_distribution<double> z2;
        for (const auto& e : stim.of(Construction::Dative))
            testing::add_verb_scores(both, "m2", e.lemma, Construction::Dative, 1.5 + z2(rng));
        auto opts = fast();
        opts.model_id = "m";
        opts.exclude_verbs = {"give", "send"};
        const auto res = run_exp2(both, dative_freq(stim, 1), stim, nullptr, opts);
        REQUIRE(res.excluded.has_value());
        CHECK(res.excluded->n_verbs == res.main.n_verbs - 2);
        REQUIRE(res.mixed.has_value());
        CHECK(res.mixed->groups == 2u);
        CHECK(res.report.find_test("exp2_excluded.competing") != nullptr);
    }
}

TEST_CASE("exp3 on the published scaling points") {
    const auto pts = load_scaling_csv(testing::data_path("fixtures/table5_scaling.csv"));
    auto opts = fast();
    opts.bootstrap = 200;
    const auto res = run_exp3(pts, opts);
    CHECK(res.comparison.size() == 3);
    CHECK(res.comparison[0].form == ScalingForm::PowerLaw3);
    REQUIRE(res.jackknife.has_value());
    CHECK(res.jackknife->b.size() == 6);
    REQUIRE(res.power.b_ci.has_value());
    CHECK(res.report.find_table("exp3_forms")->rows.size() == 3);
    CHECK(res.report.find_scalar("b") != nullptr);
    CHECK_FALSE(res.report.figures().empty());
    const auto again = run_exp3(pts, opts);
    CHECK(again.power.b_ci == res.power.b_ci);
}

namespace {

Exp4Input exp4_input(const std::map<Condition, double>& target_shift, double control_shift) {
    Exp4Input in;
    in.plan.target_verbs = {"give", "send", "offer", "lend"};
    in.plan.control_verbs = {"hand", "mail", "pass"};
    in.plan.seeds = {1, 2, 3};
    in.plan.sentences_per_verb = 40;
    std::vector<std::string> all = in.plan.target_verbs;
    all.insert(all.end(), in.plan.control_verbs.begin(), in.plan.control_verbs.end());
    double base = 0.8;
    for (const auto& v : all) {
        testing::add_verb_scores(in.pre, "gpt2", v, Construction::Dative, base);
        base += 0.1;
    }
    for (auto c : kConditions) {
        for (auto seed : in.plan.seeds) {
            ScoreSet post;
            double b = 0.8;
            const std::set<std::string> own(in.plan.verbs_for(c).begin(), in.plan.verbs_for(c).end());
            for (const auto& v : all) {
                double shift = own.count(v) ? target_shift.at(c) : control_shift;
                shift += 0.01 * static_cast<double>(seed) * (v.size() % 3 == 0 ? 1 : -1);
                testing::add_verb_scores(post, "gpt2-ft", v, Construction::Dative, b + shift);
                b += 0.1;
            }
            in.post[{c, seed}] = post;
        }
    }
    return in;
}

}  // namespace

TEST_CASE("exp4 with unchanged scores gives zero bars") {
    Exp4Input in;
    in.plan.target_verbs = {"give", "send"};
    in.plan.control_verbs = {"hand", "mail"};
    in.plan.seeds = {1, 2};
    for (const auto& v : {"give", "send", "hand", "mail"})
        testing::add_verb_scores(in.pre, "gpt2", v, Construction::Dative, 1.0);
    for (auto c : kConditions)
        for (auto s : in.plan.seeds) in.post[{c, s}] = in.pre;
    const auto res = run_exp4(in, fast());
    for (auto c : kConditions) {
        CHECK(res.aggregates.at(c).mean == 0.0);
        CHECK(res.aggregates.at(c).sd == 0.0);
        CHECK(res.aggregates.at(c).n == 2u);
    }
    CHECK(res.report.find_table("exp4_conditions") != nullptr);

    in.post.erase({Condition::Reverse, 2});
    try {
        run_exp4(in, fast());
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("Reverse") != std::string::npos);
    }
}

TEST_CASE("exp4 recovers planted condition shifts") {
    const std::map<Condition, double> shift{{Condition::Amplified, 0.7},
                                            {Condition::Attenuated, -0.4},
                                            {Condition::Reverse, -0.3},
                                            {Condition::Control, 0.0}};
    auto in = exp4_input(shift, 0.0);
    FrequencyTable base;
    for (const auto& v : {"give", "send", "offer", "lend", "hand", "mail", "pass"})
        base.cell(v, Construction::Dative) = {50, 20, {}};
    in.base = base;
    const auto res = run_exp4(in, fast());
    for (const auto& [c, s] : shift) {
        INFO(to_string(c));
        CHECK(res.aggregates.at(c).mean == doctest::Approx(s).epsilon(0.02));
        CHECK(res.aggregates.at(c).n == 3u);
    }
    REQUIRE(res.asymmetry.has_value());
    CHECK(res.asymmetry->statistic > 0);
    CHECK(res.specificity.count(Condition::Amplified) == 1);
    CHECK(res.specificity.count(Condition::Control) == 0);
    REQUIRE(res.ratio_vs_raw.has_value());
    CHECK(res.ratio_vs_raw->n == 3u * 4u * 3u);
}

TEST_CASE("seed table path") {
    std::ifstream in(testing::data_path("fixtures/table12_seeds.csv"));
    const auto values = read_seed_table(in, "t12");
    CHECK(values.size() == 20);
    const auto res = run_exp4_seed_table(values, fast());
    CHECK(std::round(res.aggregates.at(Condition::Amplified).mean * 100) / 100 == doctest::Approx(0.73));
    CHECK(std::round(res.aggregates.at(Condition::Control).sd * 100) / 100 == doctest::Approx(0.03));

    std::istringstream dup("condition,seed,ddelta\nAmplified,1,0.5\nAmplified,1,0.6\n");
    CHECK_THROWS_AS(run_exp4_seed_table(read_seed_table(dup), fast()), InputError);
    std::istringstream bad("condition,seed,ddelta\nBoosted,1,0.5\n");
    try {
        read_seed_table(bad, "s.csv");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    std::istringstream empty("condition,seed,ddelta\n");
    CHECK_THROWS_AS(run_exp4_seed_table(read_seed_table(empty), fast()), InputError);
}
