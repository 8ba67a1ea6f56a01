#include "support.hpp"

#include <cmath>
#include <random>

#include "preempt/stats/descriptive.hpp"
#include "preempt/text.hpp"

#ifndef PREEMPT_TEST_DATA_DIR
#error "PREEMPT_TEST_DATA_DIR must be defined"
#endif

namespace preempt::testing {

std::string data_path(std::string_view relative) {
    return std::string(PREEMPT_TEST_DATA_DIR) + "/" + std::string(relative);
}

ParsedSentence parse_spec(std::string_view spec, std::string id) {
    ParsedSentence s;
    s.id = std::move(id);
    std::string joined;
    for (const auto& part : text::split(spec, '|')) {
        const auto f = text::split_whitespace(part);
        if (f.size() != 5) throw std::invalid_argument("bad token spec: " + part);
        s.tokens.push_back({f[0], f[1], f[2], std::stoi(f[3]), f[4]});
        if (!joined.empty()) joined += ' ';
        joined += f[0];
    }
    s.text = joined;
    return s;
}

std::vector<double> planted_sample(std::size_t n, double mean, double sd, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z;
    std::vector<double> v(n);
    for (auto& x : v) x = z(rng);
    const double m = stats::mean(v);
    const double s = stats::sd(v);
    for (auto& x : v) x = mean + sd * (x - m) / s;
    return v;
}

void add_verb_scores(ScoreSet& set, const std::string& model, const std::string& verb, Construction c, double delta,
                     const std::optional<std::string>& condition, double base_bits) {
    for (int f = 0; f < static_cast<int>(kFramesPerVerb); ++f) {
        const double conv = base_bits + 0.25 * f;
        for (auto role : {SurfaceRole::Conv, SurfaceRole::Unconv}) {
            const double bits = role == SurfaceRole::Conv ? conv : conv + delta;
            set.add(make_sentence_surprisal({verb, c, f, role, condition}, model, {verb}, {-bits * kLn2}, 1));
        }
    }
}

StimulusSet subset(const StimulusSet& all, const std::function<bool(const VerbEntry&)>& keep) {
    StimulusSet out;
    for (const auto& e : all) {
        if (keep(e)) out.add(e);
    }
    return out;
}

const StimulusSet& bundled_stimuli() {
    static const StimulusSet set = load_stimuli(data_path("stimuli.tsv"));
    return set;
}

}  // namespace preempt::testing
