#include "preempt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <set>

#include "preempt/error.hpp"
#include "preempt/scores.hpp"
#include "preempt/stats/descriptive.hpp"
#include "preempt/stats/distributions.hpp"
#include "preempt/svg.hpp"
#include "preempt/text.hpp"

namespace preempt {

std::string resolve_model(const ScoreSet& scores, const std::string& requested) {
    const auto ids = scores.model_ids();
    if (!requested.empty()) {
        if (!ids.count(requested)) throw InputError("score set has no records for model '" + requested + "'");
        return requested;
    }
    if (ids.empty()) throw InputError("score set is empty");
    if (ids.size() > 1) {
        std::string msg = "score set holds several models; choose one of:";
        for (const auto& id : ids) msg += " " + id;
        throw InputError(msg);
    }
    return *ids.begin();
}

namespace {

void add_t(ExperimentReport& r, const std::string& id, const std::string& what, const stats::TestResult& t) {
    r.add_test({id, what, "t", t.statistic, t.df, t.p, t.effect_size});
}

// Correlation test with `controls` partialled-out variables (df = n - 2 - controls).
void add_r(ExperimentReport& r, const std::string& id, const std::string& what, double rho, std::size_t n,
           int controls = 0) {
    const double df = static_cast<double>(n) - 2.0 - controls;
    if (df < 1.0) return;
    const double p = std::fabs(rho) >= 1.0 ? 0.0 : stats::t_two_sided_p(rho * std::sqrt(df / (1.0 - rho * rho)), df);
    r.add_test({id, what, "r", rho, df, p, rho});
}

void summary_row(Table& t, const std::string& a, const std::string& b, const stats::GroupSummary& g) {
    t.add_row({a, b, static_cast<std::int64_t>(g.n), g.mean, g.sd});
}

std::vector<double> values_of(const std::vector<VerbDelta>& deltas, const StimulusSet& stimuli, Construction cx,
                              Category cat) {
    std::vector<double> out;
    for (const auto& d : deltas) {
        if (d.construction != cx) continue;
        const auto* e = stimuli.find(d.verb, d.construction);
        if (e != nullptr && e->category == cat) out.push_back(d.delta_s);
    }
    return out;
}

constexpr std::array<Category, 3> kCategories = {Category::Strong, Category::Weak, Category::None};
constexpr std::array<Construction, 3> kConstructions = {Construction::Dative, Construction::Causative,
                                                        Construction::Locative};

}  // namespace

Exp1Result run_exp1(const ScoreSet& scores, const StimulusSet& stimuli, const HumanRatings* human,
                    const ExperimentOptions& opts) {
    Exp1Result res;
    res.model_id = resolve_model(scores, opts.model_id);
    res.deltas = compute_deltas(scores, stimuli, res.model_id);
    auto& rep = res.report;
    rep.set_scalar("model_id", res.model_id);

    auto& verbs = rep.add_table("exp1_verbs", {"verb", "construction", "category", "delta_s", "conv_bits_per_word",
                                               "unconv_bits_per_word"});
    for (const auto& d : res.deltas) {
        const auto* e = stimuli.find(d.verb, d.construction);
        verbs.add_row({d.verb, std::string(to_string(d.construction)), std::string(to_string(e->category)), d.delta_s,
                       d.conv_mean, d.unconv_mean});
    }

    auto& cats = rep.add_table("exp1_categories", {"construction", "category", "n", "mean_delta_s", "sd_delta_s"});
    for (auto cx : kConstructions) {
        for (auto cat : kCategories) {
            const auto v = values_of(res.deltas, stimuli, cx, cat);
            if (v.empty()) continue;
            res.by_construction[{cx, cat}] = stats::summarize(v);
            summary_row(cats, std::string(to_string(cx)), std::string(to_string(cat)), res.by_construction[{cx, cat}]);
            if (cx == Construction::Dative) res.dative[cat] = stats::summarize(v);
        }
    }

    const auto strong = values_of(res.deltas, stimuli, Construction::Dative, Category::Strong);
    const auto none = values_of(res.deltas, stimuli, Construction::Dative, Category::None);
    if (strong.size() < 2 || none.size() < 2) {
        throw InputError("exp1 needs at least 2 Strong and 2 None dative verbs");
    }
    res.d_strong_none = stats::cohens_d(strong, none);
    res.strong_vs_none = stats::independent_t(strong, none, true);
    res.strong_vs_none.effect_size = res.d_strong_none;
    rep.set_scalar("d_strong_none", res.d_strong_none);
    add_t(rep, "exp1.strong_vs_none", "Dative Strong vs None delta S (pooled t, Cohen's d)", res.strong_vs_none);

    // effect-size ordering across constructions with both Strong and None verbs
    std::vector<stats::OrderingItem> items;
    std::set<int> usable;
    for (auto cx : kConstructions) {
        const auto s = values_of(res.deltas, stimuli, cx, Category::Strong);
        const auto n = values_of(res.deltas, stimuli, cx, Category::None);
        if (s.size() < 2 || n.size() < 2) continue;
        usable.insert(static_cast<int>(cx));
        for (double v : s) items.push_back({static_cast<int>(cx), true, v});
        for (double v : n) items.push_back({static_cast<int>(cx), false, v});
    }
    if (usable.size() >= 2) {
        res.ordering = stats::permutation_ordering_test(items, opts.permutations, opts.seed);
        auto& ord = rep.add_table("exp1_ordering", {"rank", "construction", "d_strong_none"});
        for (std::size_t i = 0; i < res.ordering->constructions.size(); ++i) {
            ord.add_row({static_cast<std::int64_t>(i + 1),
                         std::string(to_string(static_cast<Construction>(res.ordering->constructions[i]))),
                         res.ordering->observed_d[i]});
        }
        rep.set_scalar("ordering_p", res.ordering->p_text());
        // with no matches the p-value is only known to be below 1/B; the bound enters the FDR family
        const double p_bound = std::max(res.ordering->p, 1.0 / static_cast<double>(res.ordering->permutations));
        rep.add_test({"exp1.ordering", "Strong-vs-None effect-size ordering across constructions (permutation)",
                      "matches", static_cast<double>(res.ordering->matches), std::nullopt, p_bound, std::nullopt});
    } else {
        rep.add_note("ordering test skipped: fewer than 2 constructions with >= 2 Strong and >= 2 None verbs");
    }

    if (human != nullptr) {
        std::vector<VerbDelta> dative;
        for (const auto& d : res.deltas) {
            if (d.construction == Construction::Dative) dative.push_back(d);
        }
        res.join = join_human(dative, *human);
        std::vector<double> x, y;
        auto& jt = rep.add_table("exp1_human_join", {"verb", "delta_s", "human"});
        for (const auto& row : res.join->rows) {
            x.push_back(row.delta_s);
            y.push_back(row.human);
            jt.add_row({row.lemma, row.delta_s, row.human});
        }
        if (!res.join->unmatched.empty()) {
            std::string note = "verbs without a human rating:";
            for (const auto& v : res.join->unmatched) note += " " + v;
            rep.add_note(note);
        }
        res.human = stats::bootstrap_ci(x, y, opts.bootstrap, opts.seed);
        rep.set_scalar("human_r", res.human->r);
        rep.set_scalar("human_r_ci_low", res.human->ci_low);
        rep.set_scalar("human_r_ci_high", res.human->ci_high);
        rep.set_scalar("human_n", static_cast<std::int64_t>(res.human->n));
        add_r(rep, "exp1.human_r", "Verb-level Pearson r, delta S vs human (" + human->source + ")", res.human->r,
              res.human->n);
    }

    std::vector<svg::Bar> bars;
    for (auto cat : kCategories) {
        const auto it = res.dative.find(cat);
        if (it != res.dative.end()) bars.push_back({std::string(to_string(cat)), it->second.mean, it->second.sd});
    }
    rep.add_figure({"exp1_categories", svg::bar_chart(bars, {"Dative delta S by preemption category (" +
                                                                 res.model_id + ")",
                                                             "delta S (bits/word)", 640, 420})});
    rep.apply_fdr(opts.fdr_q);
    return res;
}

namespace {

struct Exp2Verb {
    std::string lemma;
    Competing competing = Competing::Unassigned;
    double delta_s = 0.0;
    double preempt = 0.0;
    double entrench = 0.0;
    bool has_freq = false;
};

std::vector<Exp2Verb> exp2_verbs(const ScoreSet& scores, const FrequencyTable& freq, const StimulusSet& stimuli,
                                 const std::string& model) {
    std::vector<Exp2Verb> out;
    std::vector<std::string> missing;
    for (const auto& d : compute_deltas(scores, stimuli, model, std::nullopt, Construction::Dative)) {
        const auto* e = stimuli.find(d.verb, Construction::Dative);
        Exp2Verb v{d.verb, e->competing, d.delta_s, 0.0, 0.0, false};
        const auto* cell = freq.find(d.verb, Construction::Dative);
        if (cell == nullptr) {
            missing.push_back(d.verb);
            continue;
        }
        v.preempt = preempt_score(cell->f_conv, cell->f_unconv);
        if (freq.total(d.verb) > 0) {
            v.entrench = entrench_score(freq, d.verb);
            v.has_freq = true;
        }
        out.push_back(v);
    }
    if (!missing.empty()) {
        std::string msg = "frequency table lacks dative counts for:";
        for (const auto& m : missing) msg += " " + m;
        throw InputError(msg);
    }
    return out;
}

Exp2Contrast contrast(const std::vector<Exp2Verb>& verbs, const std::set<std::string>& exclude) {
    std::vector<double> plus, minus, ds, p, e;
    for (const auto& v : verbs) {
        if (exclude.count(v.lemma)) continue;
        if (v.competing == Competing::PlusCompeting) plus.push_back(v.delta_s);
        if (v.competing == Competing::MinusCompeting) minus.push_back(v.delta_s);
        if (v.has_freq) {
            ds.push_back(v.delta_s);
            p.push_back(v.preempt);
            e.push_back(v.entrench);
        }
    }
    if (plus.size() < 2 || minus.size() < 2) {
        throw InputError("exp2 needs at least 2 +Competing and 2 -Competing dative verbs in the stimulus file");
    }
    Exp2Contrast c;
    c.plus = stats::summarize(plus);
    c.minus = stats::summarize(minus);
    c.d = stats::cohens_d(plus, minus);
    c.t = stats::independent_t(plus, minus, true);
    c.t.effect_size = c.d;
    c.partial_preempt = stats::partial_correlation(ds, p, e);
    c.partial_entrench = stats::partial_correlation(ds, e, p);
    c.n_verbs = ds.size();
    return c;
}

void report_contrast(ExperimentReport& rep, const std::string& prefix, const std::string& label,
                     const Exp2Contrast& c) {
    auto& t = rep.add_table(prefix + "_groups", {"group", "n", "mean_delta_s", "sd_delta_s"});
    t.add_row({"+Competing", static_cast<std::int64_t>(c.plus.n), c.plus.mean, c.plus.sd});
    t.add_row({"-Competing", static_cast<std::int64_t>(c.minus.n), c.minus.mean, c.minus.sd});
    add_t(rep, prefix + ".competing", "+Competing vs -Competing delta S" + label, c.t);
    add_r(rep, prefix + ".partial_preempt", "partial r(delta S, Preempt | Entrench)" + label, c.partial_preempt,
          c.n_verbs, 1);
    add_r(rep, prefix + ".partial_entrench", "partial r(delta S, Entrench | Preempt)" + label, c.partial_entrench,
          c.n_verbs, 1);
}

}  // namespace

Exp2Result run_exp2(const ScoreSet& scores, const FrequencyTable& freq, const StimulusSet& stimuli,
                    const HumanRatings* human, const ExperimentOptions& opts) {
    Exp2Result res;
    res.model_id = resolve_model(scores, opts.model_id);
    auto& rep = res.report;
    rep.set_scalar("model_id", res.model_id);
    const auto verbs = exp2_verbs(scores, freq, stimuli, res.model_id);
    for (const auto& v : verbs) {
        if (!v.has_freq) res.skipped_verbs.push_back(v.lemma);
    }
    if (!res.skipped_verbs.empty()) {
        std::string note = "verbs with zero corpus frequency (no entrenchment score) left out of regressions:";
        for (const auto& v : res.skipped_verbs) note += " " + v;
        rep.add_note(note);
    }

    res.main = contrast(verbs, {});
    rep.set_scalar("d_competing", res.main.d);
    report_contrast(rep, "exp2", "", res.main);

    std::vector<double> ds, p, e, pe;
    auto& vt = rep.add_table("exp2_verbs", {"verb", "competing", "delta_s", "preempt", "entrench"});
    for (const auto& v : verbs) {
        vt.add_row({v.lemma, std::string(to_string(v.competing)), v.delta_s, v.preempt,
                    v.has_freq ? Cell{v.entrench} : Cell{}});
        if (!v.has_freq) continue;
        ds.push_back(v.delta_s);
        p.push_back(v.preempt);
        e.push_back(v.entrench);
        pe.push_back(v.preempt * v.entrench);
    }
    res.ols = stats::ols({p, e, pe}, ds, true);
    res.vif = stats::vif({p, e});
    auto& ot = rep.add_table("exp2_ols", {"term", "beta", "se", "t", "p"});
    const std::vector<std::string> terms{"(Intercept)", "Preempt", "Entrench", "Preempt:Entrench"};
    for (std::size_t i = 0; i < terms.size(); ++i) {
        ot.add_row({terms[i], res.ols.beta[i], res.ols.se[i], res.ols.t[i], res.ols.p[i]});
    }
    rep.set_scalar("ols_r2", res.ols.r2);
    rep.set_scalar("vif_preempt", res.vif[0].collinear ? Cell{std::string("collinear")} : Cell{res.vif[0].value});
    rep.set_scalar("vif_entrench", res.vif[1].collinear ? Cell{std::string("collinear")} : Cell{res.vif[1].value});

    const auto models = scores.model_ids();
    if (models.size() >= 2) {
        std::vector<stats::MixedRow> rows;
        for (const auto& m : models) {
            for (const auto& v : exp2_verbs(scores, freq, stimuli, m)) {
                if (v.has_freq) rows.push_back({v.delta_s, v.preempt, v.entrench, m});
            }
        }
        res.mixed = stats::mixed_model_fit(rows);
        const auto& f = *res.mixed;
        auto& mt = rep.add_table("exp2_mixed", {"term", "beta", "se", "t", "p"});
        for (std::size_t i = 0; i < f.names.size(); ++i) {
            mt.add_row({f.names[i], f.beta[i], f.se[i], f.t[i], f.p[i]});
            rep.add_test({"exp2.mixed." + f.names[i], "mixed model fixed effect " + f.names[i], "t", f.t[i], f.df,
                          f.p[i], std::nullopt});
        }
        rep.set_scalar("mixed_var_intercept", f.var_intercept);
        rep.set_scalar("mixed_var_slope", f.var_slope);
        rep.set_scalar("mixed_var_residual", f.var_residual);
        rep.set_scalar("mixed_marginal_r2", f.marginal_r2);
        rep.set_scalar("mixed_conditional_r2", f.conditional_r2);
        rep.set_scalar("mixed_converged", std::string(f.converged ? "true" : "false"));
        if (!f.converged) rep.add_note("mixed model did not converge within its iteration budget; best point reported");
    } else {
        rep.add_note("mixed model skipped: the score set holds a single model (needs >= 2 grouping levels)");
    }

    if (human != nullptr) {
        std::vector<double> h, hp, he;
        for (const auto& v : verbs) {
            const auto it = human->values.find(v.lemma);
            if (!v.has_freq || it == human->values.end()) continue;
            h.push_back(it->second);
            hp.push_back(v.preempt);
            he.push_back(v.entrench);
        }
        if (h.size() >= 4) {
            res.human_partial_preempt = stats::partial_correlation(h, hp, he);
            res.human_partial_entrench = stats::partial_correlation(h, he, hp);
            add_r(rep, "exp2.human_partial_preempt", "partial r(human, Preempt | Entrench)", *res.human_partial_preempt,
                  h.size(), 1);
            add_r(rep, "exp2.human_partial_entrench", "partial r(human, Entrench | Preempt)",
                  *res.human_partial_entrench, h.size(), 1);
        } else {
            rep.add_note("corpus-to-human partial correlations skipped: fewer than 4 matched verbs");
        }
    }

    if (!opts.exclude_verbs.empty()) {
        const std::set<std::string> ex(opts.exclude_verbs.begin(), opts.exclude_verbs.end());
        res.excluded = contrast(verbs, ex);
        report_contrast(rep, "exp2_excluded", " (register exclusion)", *res.excluded);
        rep.set_scalar("d_competing_excluded", res.excluded->d);
    }

    std::vector<svg::Point> pts;
    for (std::size_t i = 0; i < p.size(); ++i) pts.push_back({p[i], ds[i]});
    rep.add_figure({"exp2_preempt", svg::scatter(pts, {}, {"delta S vs Preempt (" + res.model_id + ")",
                                                           "Preempt score", "delta S (bits/word)", false, 640, 420})});
    rep.apply_fdr(opts.fdr_q);
    return res;
}

Exp3Result run_exp3(const std::vector<ScalingPoint>& points, const ExperimentOptions& opts) {
    Exp3Result res;
    PowerFitOptions po;
    po.bootstrap = opts.bootstrap == 0 ? 0 : std::min<std::size_t>(opts.bootstrap, 1000);
    po.seed = opts.seed;
    res.power = fit_power_law(points, po);
    res.comparison = model_comparison(points);
    if (points.size() >= 5) res.jackknife = jackknife_loo(points);

    auto& rep = res.report;
    rep.set_scalar("a", res.power.a);
    rep.set_scalar("b", res.power.b);
    rep.set_scalar("c", res.power.c);
    if (res.power.b_ci) {
        rep.set_scalar("b_ci_low", res.power.b_ci->first);
        rep.set_scalar("b_ci_high", res.power.b_ci->second);
    }
    rep.set_scalar("adj_r2", res.power.adj_r2);
    rep.set_scalar("converged", std::string(res.power.converged ? "true" : "false"));
    auto& cmp = rep.add_table("exp3_forms", {"rank", "form", "a", "b", "c", "k", "rss", "adj_r2", "aic", "bic"});
    for (std::size_t i = 0; i < res.comparison.size(); ++i) {
        const auto& f = res.comparison[i];
        cmp.add_row({static_cast<std::int64_t>(i + 1), std::string(to_string(f.form)), f.a,
                     f.form == ScalingForm::LogLinear ? Cell{} : Cell{f.b}, f.c, static_cast<std::int64_t>(f.k), f.rss,
                     f.adj_r2, f.aic, f.bic});
    }
    if (res.jackknife) {
        auto& jk = rep.add_table("exp3_jackknife", {"left_out_n_params", "b"});
        for (std::size_t i = 0; i < points.size(); ++i) jk.add_row({points[i].n_params, res.jackknife->b[i]});
        rep.set_scalar("jackknife_mean_b", res.jackknife->mean);
        rep.set_scalar("jackknife_sd_b", res.jackknife->sd);
    }

    std::vector<svg::Point> pts;
    for (const auto& p : points) pts.push_back({p.n_params, p.r});
    std::vector<svg::Curve> curves;
    for (const auto& f : res.comparison) {
        curves.push_back({std::string(to_string(f.form)), [f](double n) { return f.predict(n); }});
    }
    rep.add_figure({"exp3_scaling", svg::scatter(pts, curves, {"Scaling of verb-level correlation",
                                                               "parameters (log scale)", "r", true, 640, 420})});
    rep.apply_fdr(opts.fdr_q);
    return res;
}

namespace {

void exp4_outputs(Exp4Result& res, const ExperimentOptions& opts,
                  const std::map<Condition, std::map<std::uint64_t, double>>& per_seed) {
    auto& rep = res.report;
    auto& st = rep.add_table("exp4_seeds", {"condition", "seed", "ddelta"});
    for (const auto& [c, seeds] : per_seed) {
        for (const auto& [s, v] : seeds) st.add_row({std::string(to_string(c)), static_cast<std::int64_t>(s), v});
    }
    auto& agg = rep.add_table("exp4_conditions", {"condition", "n_seeds", "mean_ddelta", "sd_ddelta"});
    std::vector<svg::Bar> bars;
    for (auto c : kConditions) {
        const auto it = res.aggregates.find(c);
        if (it == res.aggregates.end()) continue;
        agg.add_row({std::string(to_string(c)), static_cast<std::int64_t>(it->second.n), it->second.mean,
                     it->second.sd});
        bars.push_back({std::string(to_string(c)), it->second.mean, it->second.sd});
    }
    rep.add_figure({"exp4_conditions", svg::bar_chart(bars, {"Intervention effects (mean +/- 1 SD across seeds)",
                                                             "ddelta S (bits/word)", 640, 420})});
    rep.apply_fdr(opts.fdr_q);
}

}  // namespace

Exp4Result run_exp4(const Exp4Input& input, const ExperimentOptions& opts) {
    Exp4Result res;
    const auto& plan = input.plan;
    if (plan.seeds.empty()) throw InputError("intervention plan lists no seeds");
    const std::set<std::string> controls(plan.control_verbs.begin(), plan.control_verbs.end());
    std::map<Condition, std::map<std::string, std::vector<double>>> non_target;
    std::map<Condition, std::map<std::uint64_t, double>> per_seed;
    for (auto c : kConditions) {
        const auto& verbs = plan.verbs_for(c);
        const std::set<std::string> own(verbs.begin(), verbs.end());
        for (auto seed : plan.seeds) {
            const auto it = input.post.find({c, seed});
            if (it == input.post.end()) {
                throw InputError("missing post-training scores for condition " + std::string(to_string(c)) +
                                 ", seed " + std::to_string(seed));
            }
            std::vector<double> vals;
            for (const auto& row : analyze_pre_post(input.pre, it->second, c, seed)) {
                if (row.construction != plan.construction) continue;
                if (own.count(row.verb)) {
                    res.ddelta.rows.push_back(row);
                    vals.push_back(row.ddelta);
                } else if (c != Condition::Control && controls.count(row.verb)) {
                    non_target[c][row.verb].push_back(row.ddelta);
                }
            }
            if (vals.size() != own.size()) {
                throw InputError("scores for condition " + std::string(to_string(c)) + ", seed " +
                                 std::to_string(seed) + " do not cover every planned verb");
            }
            per_seed[c][seed] = stats::mean(vals);
        }
    }
    res.aggregates = res.ddelta.by_condition();
    auto& rep = res.report;

    auto& vt = rep.add_table("exp4_verbs", {"verb", "condition", "seed", "delta_pre", "delta_post", "ddelta"});
    for (const auto& r : res.ddelta.rows) {
        vt.add_row({r.verb, std::string(to_string(r.condition)), static_cast<std::int64_t>(r.seed), r.delta_pre,
                    r.delta_post, r.ddelta});
    }

    std::vector<double> amp, rev;
    for (const auto& [v, x] : res.ddelta.verb_means(Condition::Amplified)) amp.push_back(x);
    for (const auto& [v, x] : res.ddelta.verb_means(Condition::Reverse)) rev.push_back(x);
    if (amp.size() >= 2 && rev.size() >= 2) {
        res.asymmetry = asymmetry_test(amp, rev);
        add_t(rep, "exp4.asymmetry", "|ddelta S| Amplified vs Reverse (per-verb means over seeds)", *res.asymmetry);
    }
    for (const auto& [c, by_verb] : non_target) {
        std::vector<double> v;
        for (const auto& [verb, xs] : by_verb) v.push_back(stats::mean(xs));
        if (v.size() < 2) continue;
        res.specificity[c] = specificity_check(v);
        add_t(rep, "exp4.specificity." + std::string(to_string(c)),
              "non-target verbs ddelta S vs 0 under " + std::string(to_string(c)), res.specificity[c]);
    }
    if (input.base) {
        auto manifests = input.manifests;
        if (manifests.empty()) {
            // generation realizes the plan exactly, so the plan implies the manifests
            for (auto c : kConditions) {
                const auto [nc, nu] = condition_counts(c, plan.sentences_per_verb);
                for (auto seed : plan.seeds) {
                    CorpusManifest m{c, seed, {}};
                    for (const auto& v : plan.verbs_for(c)) m.verbs[v] = {nc, nu};
                    manifests.push_back(m);
                }
            }
        }
        std::vector<DeltaDeltaRow> rows;
        for (const auto& r : res.ddelta.rows) {
            if (r.condition != Condition::Control) rows.push_back(r);
        }
        res.ratio_vs_raw = ratio_vs_raw_correlation(rows, manifests, *input.base);
        rep.set_scalar("r_ratio", res.ratio_vs_raw->r_ratio);
        rep.set_scalar("r_raw", res.ratio_vs_raw->r_raw);
        add_r(rep, "exp4.r_ratio", "ddelta S vs implied Preempt change", res.ratio_vs_raw->r_ratio,
              res.ratio_vs_raw->n);
        add_r(rep, "exp4.r_raw", "ddelta S vs added conventional sentences", res.ratio_vs_raw->r_raw,
              res.ratio_vs_raw->n);
    }
    exp4_outputs(res, opts, per_seed);
    return res;
}

std::vector<SeedValue> read_seed_table(std::istream& in, const std::string& source) {
    std::vector<SeedValue> out;
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = text::trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto cols = text::split(t, ',');
        if (cols.size() != 3) throw ParseError(source, lineno, "expected 3 columns: condition,seed,ddelta");
        if (!header) {
            if (text::trim(cols[0]) != "condition") throw ParseError(source, lineno, "expected header condition,seed,ddelta");
            header = true;
            continue;
        }
        const auto c = parse_condition(text::trim(cols[0]));
        if (!c) throw ParseError(source, lineno, "unknown condition '" + cols[0] + "'");
        SeedValue v;
        v.condition = *c;
        try {
            v.seed = std::stoull(std::string(text::trim(cols[1])));
            v.ddelta = std::stod(std::string(text::trim(cols[2])));
        } catch (const std::exception&) {
            throw ParseError(source, lineno, "non-numeric seed or ddelta");
        }
        out.push_back(v);
    }
    return out;
}

Exp4Result run_exp4_seed_table(const std::vector<SeedValue>& values, const ExperimentOptions& opts) {
    if (values.empty()) throw InputError("seed table is empty");
    Exp4Result res;
    std::map<Condition, std::map<std::uint64_t, double>> per_seed;
    for (const auto& v : values) {
        if (!per_seed[v.condition].emplace(v.seed, v.ddelta).second) {
            throw InputError("seed table repeats seed " + std::to_string(v.seed) + " for " +
                             std::string(to_string(v.condition)));
        }
    }
    for (const auto& [c, seeds] : per_seed) {
        std::vector<double> xs;
        for (const auto& [s, x] : seeds) xs.push_back(x);
        res.aggregates[c] = aggregate(xs);
    }
    exp4_outputs(res, opts, per_seed);
    return res;
}

}  // namespace preempt
