#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "preempt/conllu.hpp"
#include "preempt/error.hpp"
#include "preempt/experiments.hpp"
#include "preempt/human.hpp"
#include "preempt/intervention.hpp"
#include "preempt/miner.hpp"
#include "preempt/ngram.hpp"
#include "preempt/report.hpp"
#include "preempt/scaling.hpp"
#include "preempt/stimulus.hpp"
#include "preempt/surprisal.hpp"
#include "preempt/text.hpp"

namespace fs = std::filesystem;
using namespace preempt;

namespace {

// Settings shared by every subcommand; set on the command line or as
// top-level keys of the config file.
struct Common {
    std::string stimuli = "data/stimuli.tsv";
    std::string animacy = "data/animate_nouns.txt";
    std::string out_dir = "out";
    std::size_t bootstrap = 10000;
    std::size_t permutations = 10000;
    std::uint64_t seed = 42;
    double fdr_q = 0.05;
    double confidence = 0.75;
    int min_tokens = 4;
    int max_tokens = 60;
    double competing_plus = 0.60;
    double competing_minus = 0.45;
    std::string model_id;
};

ExperimentOptions options(const Common& c) {
    ExperimentOptions o;
    o.model_id = c.model_id;
    o.bootstrap = c.bootstrap;
    o.permutations = c.permutations;
    o.seed = c.seed;
    o.fdr_q = c.fdr_q;
    return o;
}

std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw InputError("cannot write " + p.string());
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_report(const ExperimentReport& r, const std::string& dir) {
    const fs::path d(dir);
    open_out(d / (r.experiment() + "_report.json")) << to_json(r) << '\n';
    for (const auto& t : r.tables()) {
        auto out = open_out(d / (t.name + ".csv"));
        write_table_csv(out, t);
    }
    for (const auto& f : r.figures()) open_out(d / (f.name + ".svg")) << f.svg;
    std::size_t rejected = 0;
    for (const auto& t : r.tests()) rejected += t.rejected;
    std::cout << r.experiment() << ": " << r.tests().size() << " tests (" << rejected << " significant after BH at q = "
              << r.fdr_q() << "), " << r.tables().size() << " tables, " << r.figures().size() << " figures -> "
              << dir << '\n';
    for (const auto& n : r.notes()) std::cout << "  note: " << n << '\n';
}

std::optional<HumanRatings> human_ratings(const std::string& path, const std::string& kind) {
    if (path.empty()) return std::nullopt;
    if (kind == "dais") return load_human(path, HumanRatings::Kind::DaisBias);
    if (kind == "likert") return load_human(path, HumanRatings::Kind::LikertMean);
    throw InputError("human-kind must be dais or likert, got '" + kind + "'");
}

std::vector<std::vector<std::string>> read_lm_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open corpus " + path);
    std::vector<std::vector<std::string>> out;
    if (path.ends_with(".conllu")) {
        for (const auto& s : read_conllu_strict(in, path)) {
            std::vector<std::string> words;
            for (const auto& t : s.tokens) {
                auto w = text::to_lower(text::strip_punct(t.form));
                if (!w.empty()) words.push_back(std::move(w));
            }
            if (!words.empty()) out.push_back(std::move(words));
        }
        return out;
    }
    std::string line;
    while (std::getline(in, line)) {
        auto toks = ngram_tokenize(line);
        if (!toks.empty()) out.push_back(std::move(toks));
    }
    return out;
}

// "Condition:seed=path"
std::pair<std::pair<Condition, std::uint64_t>, std::string> parse_post_spec(const std::string& spec) {
    const auto eq = spec.find('=');
    const auto colon = spec.find(':');
    if (eq == std::string::npos || colon == std::string::npos || colon > eq) {
        throw InputError("--post expects Condition:seed=path, got '" + spec + "'");
    }
    const auto c = parse_condition(spec.substr(0, colon));
    if (!c) throw InputError("unknown condition in --post '" + spec + "'");
    std::uint64_t seed = 0;
    try {
        seed = std::stoull(spec.substr(colon + 1, eq - colon - 1));
    } catch (const std::exception&) {
        throw InputError("bad seed in --post '" + spec + "'");
    }
    return {{*c, seed}, spec.substr(eq + 1)};
}

int run(int argc, char** argv) {
    CLI::App app{"Statistical preemption analysis: corpus mining, surprisal scoring and experiments"};
    app.set_config("--config", "", "key = value config file; [section] keys apply to that subcommand");
    // common options may also follow the subcommand name
    app.fallthrough();
    app.require_subcommand(1);

    Common c;
    app.add_option("--stimuli", c.stimuli, "stimulus TSV")->capture_default_str();
    app.add_option("--animacy", c.animacy, "animate-noun lexicon")->capture_default_str();
    app.add_option("-o,--out-dir", c.out_dir, "output directory")->capture_default_str();
    app.add_option("--bootstrap", c.bootstrap, "bootstrap resamples")->capture_default_str();
    app.add_option("--permutations", c.permutations, "permutation-test relabellings")->capture_default_str();
    app.add_option("--seed", c.seed, "random seed")->capture_default_str();
    app.add_option("--fdr-q", c.fdr_q, "Benjamini-Hochberg q")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    app.add_option("--confidence", c.confidence, "minimum parse confidence")->capture_default_str();
    app.add_option("--min-tokens", c.min_tokens, "shortest sentence kept")->capture_default_str();
    app.add_option("--max-tokens", c.max_tokens, "longest sentence kept")->capture_default_str();
    app.add_option("--competing-plus", c.competing_plus, "+Competing share threshold")->capture_default_str();
    app.add_option("--competing-minus", c.competing_minus, "-Competing share threshold")->capture_default_str();
    app.add_option("--model-id", c.model_id, "model to analyse when a score set holds several");

    // mine
    auto* mine = app.add_subcommand("mine", "count constructions in CoNLL-U corpora");
    std::vector<std::string> conllu;
    std::string freq_out = "frequencies.csv", corpus_id;
    unsigned threads = 0;
    mine->add_option("conllu", conllu, "CoNLL-U files")->required()->check(CLI::ExistingFile);
    mine->add_option("--freq-out", freq_out, "frequency CSV (inside the output directory)")->capture_default_str();
    mine->add_option("--threads", threads, "parallel files (0: hardware concurrency)");
    mine->add_option("--corpus-id", corpus_id, "corpus label");

    // ngram-train
    auto* train = app.add_subcommand("ngram-train", "train a Kneser-Ney n-gram model");
    std::string train_corpus, lm_path = "ngram.lm";
    int order = 5;
    double discount = 0.75;
    train->add_option("corpus", train_corpus, "text (one sentence per line) or .conllu")->required()->check(CLI::ExistingFile);
    train->add_option("--order", order, "n-gram order")->capture_default_str();
    train->add_option("--discount", discount, "absolute discount")->capture_default_str();
    train->add_option("--lm", lm_path, "model file to write")->capture_default_str();

    // score-ngram
    auto* score = app.add_subcommand("score-ngram", "score the stimulus frames with an n-gram model");
    std::string score_lm, scores_out = "scores.jsonl", ngram_model_id = "ngram", condition;
    score->add_option("lm", score_lm, "model file")->required()->check(CLI::ExistingFile);
    score->add_option("--scores-out", scores_out, "JSONL output (inside the output directory)")->capture_default_str();
    score->add_option("--name", ngram_model_id, "model id written into the records")->capture_default_str();
    score->add_option("--condition", condition, "condition tag for the records");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "validate and merge score JSONL files");
    std::vector<std::string> ingest_in;
    std::string merged_out = "scores.jsonl";
    ingest->add_option("jsonl", ingest_in, "score files")->required()->check(CLI::ExistingFile);
    ingest->add_option("--scores-out", merged_out, "merged JSONL (inside the output directory)")->capture_default_str();

    // experiments
    std::string scores_path, human_path, human_kind = "dais", freq_path, points_path;
    std::vector<std::string> exclude;
    auto* e1 = app.add_subcommand("exp1", "category contrasts, ordering test and human correlation");
    e1->add_option("--scores", scores_path, "score JSONL")->required()->check(CLI::ExistingFile);
    e1->add_option("--human", human_path, "human ratings TSV")->check(CLI::ExistingFile);
    e1->add_option("--human-kind", human_kind, "dais or likert")->capture_default_str();

    auto* e2 = app.add_subcommand("exp2", "+Competing/-Competing contrast and partial correlations");
    e2->add_option("--scores", scores_path, "score JSONL")->required()->check(CLI::ExistingFile);
    e2->add_option("--freq", freq_path, "frequency CSV from `mine`")->required()->check(CLI::ExistingFile);
    e2->add_option("--human", human_path, "human ratings TSV")->check(CLI::ExistingFile);
    e2->add_option("--human-kind", human_kind, "dais or likert")->capture_default_str();
    e2->add_option("--exclude", exclude, "verbs left out of the exclusion rerun");

    auto* e3 = app.add_subcommand("exp3", "scaling-law fit, form comparison and jackknife");
    e3->add_option("--points", points_path, "CSV n_params,r")->required()->check(CLI::ExistingFile);

    auto* e4 = app.add_subcommand("exp4", "intervention corpora and delta-delta-S analysis");
    std::string seed_table, pre_path, base_freq, generate_dir;
    std::vector<std::string> post_specs, targets, controls;
    std::vector<std::uint64_t> seeds;
    int per_verb = 500;
    e4->add_option("--seed-table", seed_table, "CSV condition,seed,ddelta of per-seed means")->check(CLI::ExistingFile);
    e4->add_option("--pre", pre_path, "pre-training score JSONL")->check(CLI::ExistingFile);
    e4->add_option("--post", post_specs, "Condition:seed=scores.jsonl, one per fine-tuned model");
    e4->add_option("--base-freq", base_freq, "frequency CSV for the ratio-vs-raw analysis")->check(CLI::ExistingFile);
    e4->add_option("--targets", targets, "target verbs");
    e4->add_option("--controls", controls, "control verbs");
    e4->add_option("--seeds", seeds, "fine-tuning seeds");
    e4->add_option("--sentences-per-verb", per_verb, "generated sentences per verb")->capture_default_str();
    e4->add_option("--generate", generate_dir, "write condition corpora and manifests to this directory and stop");

    auto* rep = app.add_subcommand("report", "combine experiment reports and apply BH-FDR across all tests");
    std::vector<std::string> report_in;
    rep->add_option("reports", report_in, "*_report.json files")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const auto load_stimuli_file = [&] { return load_stimuli(c.stimuli); };

    if (*mine) {
        const auto stim = load_stimuli_file();
        FilterConfig fc{c.min_tokens, c.max_tokens, c.confidence};
        const CorpusScanner scanner(stim, AnimacyLexicon::load(c.animacy), fc);
        auto table = scanner.scan_files(conllu, threads);
        table.set_corpus_id(corpus_id.empty() ? fs::path(conllu.front()).stem().string() : corpus_id);
        auto out = open_out(fs::path(c.out_dir) / freq_out);
        write_frequency_csv(out, table);
        open_out(fs::path(c.out_dir) / "frequencies_summary.json") << frequency_summary_json(table) << '\n';
        std::cout << "mine: " << table.sentences_seen() << " sentences, " << table.parse_errors() << " parse errors, "
                  << table.untargeted() << " without a stimulus verb -> " << (fs::path(c.out_dir) / freq_out).string()
                  << '\n';
    } else if (*train) {
        const auto corpus = read_lm_corpus(train_corpus);
        const auto lm = NgramModel::train(corpus, order, discount);
        auto out = open_out(fs::path(c.out_dir) / lm_path);
        lm.save(out);
        std::cout << "ngram-train: order " << order << ", " << corpus.size() << " sentences, vocabulary "
                  << lm.vocabulary_size() << " -> " << (fs::path(c.out_dir) / lm_path).string() << '\n';
    } else if (*score) {
        const auto stim = load_stimuli_file();
        const auto lm = NgramModel::load_file(score_lm);
        const auto set = score_stimuli(lm, stim, ngram_model_id,
                                       condition.empty() ? std::nullopt : std::optional<std::string>(condition));
        auto out = open_out(fs::path(c.out_dir) / scores_out);
        write_scores(out, set);
        std::cout << "score-ngram: " << set.size() << " records -> " << (fs::path(c.out_dir) / scores_out).string()
                  << '\n';
    } else if (*ingest) {
        ScoreSet merged;
        for (const auto& p : ingest_in) {
            const auto part = ingest_scores(p);
            for (const auto& r : part.records()) merged.add(r);
        }
        auto out = open_out(fs::path(c.out_dir) / merged_out);
        write_scores(out, merged);
        std::map<std::string, std::size_t> per_model;
        for (const auto& r : merged.records()) ++per_model[r.model_id];
        std::cout << "ingest: " << merged.size() << " records, 0 errors\n";
        for (const auto& [m, n] : per_model) std::cout << "  " << m << ": " << n << '\n';
        open_out(fs::path(c.out_dir) / "ingest_summary.csv") << [&] {
            std::ostringstream ss;
            ss << "model_id,records\n";
            for (const auto& [m, n] : per_model) ss << m << ',' << n << '\n';
            return ss.str();
        }();
    } else if (*e1) {
        const auto stim = load_stimuli_file();
        const auto human = human_ratings(human_path, human_kind);
        const auto res = run_exp1(ingest_scores(scores_path), stim, human ? &*human : nullptr, options(c));
        write_report(res.report, c.out_dir);
    } else if (*e2) {
        const auto stim = load_stimuli_file();
        const auto human = human_ratings(human_path, human_kind);
        auto opts = options(c);
        opts.exclude_verbs = exclude;
        const auto res =
            run_exp2(ingest_scores(scores_path), load_frequency_csv(freq_path), stim, human ? &*human : nullptr, opts);
        write_report(res.report, c.out_dir);
    } else if (*e3) {
        const auto res = run_exp3(load_scaling_csv(points_path), options(c));
        write_report(res.report, c.out_dir);
        std::cout << "  a N^b + c: a = " << res.power.a << ", b = " << res.power.b << ", c = " << res.power.c
                  << ", adj R^2 = " << res.power.adj_r2 << '\n';
    } else if (*e4) {
        InterventionPlan plan;
        plan.target_verbs = targets;
        plan.control_verbs = controls;
        plan.sentences_per_verb = per_verb;
        if (!seeds.empty()) plan.seeds = seeds;
        if (!seed_table.empty()) {
            std::ifstream in(seed_table);
            const auto res = run_exp4_seed_table(read_seed_table(in, seed_table), options(c));
            write_report(res.report, c.out_dir);
        } else if (!generate_dir.empty()) {
            const auto stim = load_stimuli_file();
            for (auto cond : kConditions) {
                for (auto s : plan.seeds) {
                    const auto corpus = generate_condition_corpus(plan, cond, stim, s);
                    const auto stem = std::string(to_string(cond)) + "_" + std::to_string(s);
                    auto out = open_out(fs::path(generate_dir) / (stem + ".txt"));
                    write_corpus(out, corpus);
                    open_out(fs::path(generate_dir) / (stem + "_manifest.json")) << manifest_json(corpus.manifest)
                                                                                  << '\n';
                }
            }
            std::cout << "exp4: wrote " << kConditions.size() * plan.seeds.size() << " corpora to " << generate_dir
                      << '\n';
        } else {
            if (pre_path.empty() || post_specs.empty()) {
                throw InputError("exp4 needs --seed-table, --generate, or --pre with --post");
            }
            Exp4Input input;
            input.plan = plan;
            input.pre = ingest_scores(pre_path);
            for (const auto& spec : post_specs) {
                auto [key, path] = parse_post_spec(spec);
                if (!input.post.emplace(key, ingest_scores(path)).second) {
                    throw InputError("--post repeats " + std::string(to_string(key.first)) + ":" +
                                     std::to_string(key.second));
                }
            }
            if (!base_freq.empty()) input.base = load_frequency_csv(base_freq);
            const auto res = run_exp4(input, options(c));
            write_report(res.report, c.out_dir);
        }
    } else if (*rep) {
        ExperimentReport all("run");
        for (const auto& p : report_in) all.absorb(report_from_json(slurp(p)));
        all.apply_fdr(c.fdr_q);
        Table tests{"run_tests", {"id", "statistic", "value", "df", "p", "p_adjusted", "significant", "effect_size",
                                  "description"}, {}};
        for (const auto& t : all.tests()) {
            tests.add_row({t.id, t.statistic_name, t.statistic, t.df ? Cell{*t.df} : Cell{}, t.p, t.p_adjusted,
                           std::string(t.rejected ? "yes" : "no"), t.effect_size ? Cell{*t.effect_size} : Cell{},
                           t.description});
        }
        auto out = open_out(fs::path(c.out_dir) / "run_tests.csv");
        write_table_csv(out, tests);
        open_out(fs::path(c.out_dir) / "run_report.json") << to_json(all) << '\n';
        std::cout << "report: " << all.tests().size() << " tests across " << report_in.size()
                  << " reports; BH at q = " << c.fdr_q << " -> " << c.out_dir << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const DegenerateError& e) {
        std::cerr << "degenerate statistics: " << e.what() << '\n';
        return 2;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
