#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "preempt/conllu.hpp"
#include "preempt/miner.hpp"
#include "preempt/ngram.hpp"
#include "preempt/stats/correlation.hpp"
#include "preempt/stimulus.hpp"

namespace {

const std::string kData = PREEMPT_DATA_DIR;

std::vector<std::vector<std::string>> synthetic_corpus(std::size_t sentences) {
    static const std::vector<std::string> words = {"the", "a",     "man",  "woman", "gave", "sent", "book",
                                                   "to",  "letter", "her", "him",   "read", "dog",  "quickly"};
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    std::uniform_int_distribution<int> len(4, 14);
    std::vector<std::vector<std::string>> out(sentences);
    for (auto& s : out) {
        const int n = len(rng);
        for (int i = 0; i < n; ++i) s.push_back(words[pick(rng)]);
    }
    return out;
}

void BM_NgramTrain(benchmark::State& state) {
    const auto corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto lm = preempt::NgramModel::train(corpus, 5, 0.75);
        benchmark::DoNotOptimize(lm);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NgramTrain)->Arg(1000)->Arg(10000);

void BM_NgramScore(benchmark::State& state) {
    const auto corpus = synthetic_corpus(5000);
    const auto lm = preempt::NgramModel::train(corpus, 5, 0.75);
    const auto probe = synthetic_corpus(200);
    std::size_t tokens = 0;
    for (auto _ : state) {
        for (const auto& s : probe) {
            auto scored = lm.score(s);
            tokens += scored.size();
            benchmark::DoNotOptimize(scored);
        }
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(tokens));
}
BENCHMARK(BM_NgramScore);

void BM_CorpusScan(benchmark::State& state) {
    const auto stimuli = preempt::load_stimuli(kData + "/stimuli.tsv");
    const auto animacy = preempt::AnimacyLexicon::load(kData + "/animate_nouns.txt");
    std::ifstream in(kData + "/gold/gold40.conllu");
    const auto gold = preempt::read_conllu_strict(in, "gold40.conllu");
    std::vector<preempt::ParsedSentence> sentences;
    for (int rep = 0; rep < 50; ++rep) sentences.insert(sentences.end(), gold.begin(), gold.end());
    const preempt::CorpusScanner scanner(stimuli, animacy);
    for (auto _ : state) {
        auto table = scanner.scan(sentences);
        benchmark::DoNotOptimize(table);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sentences.size()));
}
BENCHMARK(BM_CorpusScan);

void BM_BootstrapCI(benchmark::State& state) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> z;
    std::vector<double> x(60), y(60);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = z(rng);
        y[i] = 0.5 * x[i] + z(rng);
    }
    for (auto _ : state) {
        auto r = preempt::stats::bootstrap_ci(x, y, static_cast<std::size_t>(state.range(0)), 42);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_BootstrapCI)->Arg(1000)->Arg(10000);

}  // namespace
BENCHMARK_MAIN();
