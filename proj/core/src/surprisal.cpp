#include "preempt/surprisal.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "preempt/error.hpp"
#include "preempt/text.hpp"

namespace preempt {

using nlohmann::json;

std::string_view to_string(SurfaceRole r) { return r == SurfaceRole::Conv ? "conv" : "unconv"; }

std::string describe(const ScoreKey& k) {
    std::string s = k.verb + "/" + std::string(to_string(k.construction)) + "/frame " + std::to_string(k.frame) + "/" +
                    std::string(to_string(k.variant));
    if (k.condition) s += "/" + *k.condition;
    return s;
}

SentenceSurprisal make_sentence_surprisal(ScoreKey key, std::string model_id, std::vector<std::string> tokens,
                                          std::vector<double> logprobs, int word_count) {
    if (tokens.size() != logprobs.size()) {
        throw InputError("tokens and logprobs differ in length (" + std::to_string(tokens.size()) + " vs " +
                         std::to_string(logprobs.size()) + ")");
    }
    if (word_count < 1) throw InputError("word count must be at least 1");
    double nats = 0.0;
    for (double lp : logprobs) {
        if (!std::isfinite(lp) || lp > 0.0) throw InputError("logprob must be finite and <= 0");
        nats -= lp;
    }
    SentenceSurprisal s;
    s.key = std::move(key);
    s.model_id = std::move(model_id);
    s.tokens = std::move(tokens);
    s.logprobs = std::move(logprobs);
    s.word_count = word_count;
    s.total_bits = nats / kLn2;
    s.bits_per_word = s.total_bits / word_count;
    return s;
}

void ScoreSet::add(SentenceSurprisal s) {
    auto idx = std::make_pair(s.model_id, s.key);
    if (index_.count(idx)) throw InputError("duplicate score key " + describe(s.key) + " for model " + s.model_id);
    index_.emplace(std::move(idx), records_.size());
    records_.push_back(std::move(s));
}

const SentenceSurprisal* ScoreSet::find(const std::string& model_id, const ScoreKey& key) const {
    const auto it = index_.find({model_id, key});
    return it == index_.end() ? nullptr : &records_[it->second];
}

std::set<std::string> ScoreSet::model_ids() const {
    std::set<std::string> ids;
    for (const auto& r : records_) ids.insert(r.model_id);
    return ids;
}

ScoreSet ScoreSet::for_model(const std::string& model_id) const {
    ScoreSet out;
    out.provenance = provenance;
    for (const auto& r : records_) {
        if (r.model_id == model_id) out.add(r);
    }
    return out;
}

namespace {

SentenceSurprisal from_json(const json& j) {
    const auto require = [&](const char* field) -> const json& {
        if (!j.contains(field)) throw InputError(std::string("missing field '") + field + "'");
        return j.at(field);
    };
    ScoreKey key;
    const auto& verb = require("verb");
    if (!verb.is_string()) throw InputError("'verb' must be a string");
    key.verb = verb.get<std::string>();
    const auto& cx = require("construction");
    if (!cx.is_string()) throw InputError("'construction' must be a string");
    const auto parsed = parse_construction(cx.get<std::string>());
    if (!parsed) throw InputError("unknown construction '" + cx.get<std::string>() + "'");
    key.construction = *parsed;
    const auto& frame = require("frame");
    if (!frame.is_number_integer()) throw InputError("'frame' must be an integer");
    key.frame = frame.get<int>();
    if (key.frame < 0) throw InputError("'frame' must be non-negative");
    const auto& variant = require("variant");
    if (variant == "conv") {
        key.variant = SurfaceRole::Conv;
    } else if (variant == "unconv") {
        key.variant = SurfaceRole::Unconv;
    } else {
        throw InputError("'variant' must be \"conv\" or \"unconv\"");
    }
    if (j.contains("condition") && !j.at("condition").is_null()) {
        if (!j.at("condition").is_string()) throw InputError("'condition' must be a string or null");
        key.condition = j.at("condition").get<std::string>();
    }
    const auto& words = require("words");
    if (!words.is_number_integer()) throw InputError("'words' must be an integer");
    const auto& tokens = require("tokens");
    const auto& logprobs = require("logprobs");
    if (!tokens.is_array() || !logprobs.is_array()) throw InputError("'tokens' and 'logprobs' must be arrays");
    std::vector<std::string> toks;
    std::vector<double> lps;
    for (const auto& t : tokens) {
        if (!t.is_string()) throw InputError("'tokens' must contain strings");
        toks.push_back(t.get<std::string>());
    }
    for (const auto& l : logprobs) {
        if (!l.is_number()) throw InputError("'logprobs' must contain numbers");
        lps.push_back(l.get<double>());
    }
    const auto& model = require("model_id");
    if (!model.is_string()) throw InputError("'model_id' must be a string");
    return make_sentence_surprisal(std::move(key), model.get<std::string>(), std::move(toks), std::move(lps),
                                   words.get<int>());
}

}  // namespace

ScoreSet parse_scores(std::istream& in, const std::string& source) {
    ScoreSet set;
    set.provenance = source;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(source, lineno, std::string("invalid JSON: ") + e.what());
        }
        if (!j.is_object()) throw ParseError(source, lineno, "expected a JSON object");
        try {
            set.add(from_json(j));
        } catch (const ParseError&) {
            throw;
        } catch (const InputError& e) {
            throw ParseError(source, lineno, e.what());
        } catch (const json::exception& e) {
            throw ParseError(source, lineno, e.what());
        }
    }
    return set;
}

ScoreSet ingest_scores(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open score file: " + path);
    return parse_scores(in, path);
}

std::string to_jsonl_line(const SentenceSurprisal& s) {
    nlohmann::ordered_json j;
    j["verb"] = s.key.verb;
    j["construction"] = std::string(to_string(s.key.construction));
    j["frame"] = s.key.frame;
    j["variant"] = std::string(to_string(s.key.variant));
    j["condition"] = s.key.condition ? json(*s.key.condition) : json(nullptr);
    j["words"] = s.word_count;
    j["tokens"] = s.tokens;
    j["logprobs"] = s.logprobs;
    j["model_id"] = s.model_id;
    return j.dump();
}

void write_scores(std::ostream& out, const ScoreSet& set) {
    for (const auto& r : set.records()) out << to_jsonl_line(r) << '\n';
}

double mean_surprisal(std::span<const TokenScore> tokens, int word_count) {
    if (word_count < 1) throw InputError("mean_surprisal: word count must be at least 1");
    double nats = 0.0;
    for (const auto& t : tokens) nats -= t.logprob;
    return nats / (kLn2 * word_count);
}

VerbDelta delta_s(std::span<const SentenceSurprisal> conv, std::span<const SentenceSurprisal> unconv) {
    if (conv.empty() || conv.size() != unconv.size()) {
        throw InputError("delta_s: conventional and unconventional frame counts differ or are empty");
    }
    VerbDelta d;
    d.verb = conv.front().key.verb;
    d.construction = conv.front().key.construction;
    double c = 0.0, u = 0.0;
    for (std::size_t i = 0; i < conv.size(); ++i) {
        const auto& a = conv[i].key;
        const auto& b = unconv[i].key;
        if (a.verb != d.verb || b.verb != d.verb) throw InputError("delta_s: verb mismatch");
        if (a.frame != b.frame) {
            throw InputError("delta_s: frame mismatch (" + std::to_string(a.frame) + " vs " + std::to_string(b.frame) +
                             ") for " + d.verb);
        }
        c += conv[i].bits_per_word;
        u += unconv[i].bits_per_word;
    }
    const auto n = static_cast<double>(conv.size());
    d.n_frames = static_cast<int>(conv.size());
    d.conv_mean = c / n;
    d.unconv_mean = u / n;
    d.delta_s = d.unconv_mean - d.conv_mean;
    return d;
}

std::vector<VerbDelta> compute_deltas(const ScoreSet& scores, const StimulusSet& stimuli, const std::string& model_id,
                                      const std::optional<std::string>& condition, std::optional<Construction> only) {
    std::vector<VerbDelta> out;
    std::vector<std::string> missing;
    for (const auto& e : stimuli) {
        if (only && e.construction != *only) continue;
        std::vector<SentenceSurprisal> conv, unconv;
        for (int f = 0; f < static_cast<int>(kFramesPerVerb); ++f) {
            for (auto role : {SurfaceRole::Conv, SurfaceRole::Unconv}) {
                ScoreKey key{e.lemma, e.construction, f, role, condition};
                const auto* rec = scores.find(model_id, key);
                if (rec == nullptr) {
                    missing.push_back(describe(key));
                    continue;
                }
                (role == SurfaceRole::Conv ? conv : unconv).push_back(*rec);
            }
        }
        if (conv.size() == kFramesPerVerb && unconv.size() == kFramesPerVerb) out.push_back(delta_s(conv, unconv));
    }
    if (!missing.empty()) {
        std::string msg = "score set for model '" + model_id + "' lacks " + std::to_string(missing.size()) + " key(s):";
        for (std::size_t i = 0; i < missing.size(); ++i) {
            if (i == 20) {
                msg += " ...";
                break;
            }
            msg += " " + missing[i];
        }
        throw InputError(msg);
    }
    return out;
}

double slor(const SentenceSurprisal& sentence, std::span<const double> unigram_logprobs) {
    if (unigram_logprobs.size() != sentence.logprobs.size()) {
        throw InputError("slor: unigram scores (" + std::to_string(unigram_logprobs.size()) +
                         ") do not align with sentence tokens (" + std::to_string(sentence.logprobs.size()) + ")");
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < unigram_logprobs.size(); ++i) diff += sentence.logprobs[i] - unigram_logprobs[i];
    return diff / (kLn2 * sentence.word_count);
}

}  // namespace preempt
