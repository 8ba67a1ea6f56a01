#include "preempt/ngram.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "preempt/error.hpp"
#include "preempt/text.hpp"

namespace preempt {

std::vector<std::string> ngram_tokenize(std::string_view sentence) {
    std::vector<std::string> out;
    for (const auto& raw : text::split_whitespace(sentence)) {
        std::string_view w = raw;
        std::vector<std::string> trailing;
        while (!w.empty() && std::ispunct(static_cast<unsigned char>(w.front()))) {
            out.emplace_back(1, w.front());
            w.remove_prefix(1);
        }
        while (!w.empty() && std::ispunct(static_cast<unsigned char>(w.back()))) {
            trailing.emplace_back(1, w.back());
            w.remove_suffix(1);
        }
        if (!w.empty()) out.push_back(text::to_lower(w));
        out.insert(out.end(), trailing.rbegin(), trailing.rend());
    }
    return out;
}

NgramModel::Key NgramModel::pack(std::span<const Id> ids) {
    Key k(ids.size() * sizeof(Id), '\0');
    if (!ids.empty()) std::memcpy(k.data(), ids.data(), k.size());
    return k;
}

NgramModel::Id NgramModel::lookup(std::string_view word) const {
    const auto it = word_to_id_.find(std::string(word));
    return it == word_to_id_.end() ? 2 : it->second;
}

NgramModel::Id NgramModel::intern(const std::string& word) {
    const auto [it, inserted] = word_to_id_.emplace(word, static_cast<Id>(id_to_word_.size()));
    if (inserted) id_to_word_.push_back(word);
    return it->second;
}

NgramModel NgramModel::train(const std::vector<std::vector<std::string>>& sentences, int order, double discount) {
    if (order < 1) throw InputError("n-gram order must be at least 1");
    if (!(discount > 0.0 && discount < 1.0)) throw InputError("Kneser-Ney discount must lie in (0, 1)");
    if (sentences.empty()) throw InputError("cannot train an n-gram model on an empty corpus");

    NgramModel m;
    m.order_ = order;
    m.discount_ = discount;
    m.intern(std::string(kBos));
    m.intern(std::string(kEos));
    m.intern(std::string(kUnk));
    m.raw_.assign(static_cast<std::size_t>(order), {});

    std::vector<Id> ids;
    for (const auto& s : sentences) {
        ids.clear();
        ids.push_back(0);
        for (const auto& w : s) ids.push_back(m.intern(w));
        ids.push_back(1);
        for (int k = 1; k <= order; ++k) {
            if (static_cast<int>(ids.size()) < k) break;
            for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= ids.size(); ++i) {
                if (k == 1 && ids[i] == 0) continue;
                ++m.raw_[static_cast<std::size_t>(k - 1)][pack(std::span<const Id>(ids).subspan(i, static_cast<std::size_t>(k)))];
            }
        }
    }
    m.rebuild();
    return m;
}

void NgramModel::rebuild() {
    const auto n = static_cast<std::size_t>(order_);
    adjusted_.assign(n, {});
    context_.assign(n, {});
    for (std::size_t k = n; k >= 1; --k) {
        auto& adj = adjusted_[k - 1];
        if (k == n) {
            for (const auto& [key, c] : raw_[k - 1]) adj[key] = static_cast<double>(c);
        } else {
            // continuation counts from the distinct left extensions at order k+1
            for (const auto& [key, c] : raw_[k]) {
                if (c == 0) continue;
                adj[key.substr(sizeof(Id))] += 1.0;
            }
            for (const auto& [key, c] : raw_[k - 1]) {
                Id first = 0;
                std::memcpy(&first, key.data(), sizeof(Id));
                if (first == 0) adj[key] = static_cast<double>(c);
            }
        }
        auto& ctx = context_[k - 1];
        for (const auto& [key, a] : adj) {
            if (a <= 0.0) continue;
            auto& st = ctx[key.substr(0, key.size() - sizeof(Id))];
            st.total += a;
            st.types += 1.0;
        }
    }
}

double NgramModel::prob_ids(Id word, std::span<const Id> context) const {
    const auto k = context.size() + 1;
    if (k == 1) {
        const auto& ctx = context_[0];
        const auto it = ctx.find(Key());
        const double vocab = static_cast<double>(vocabulary_size());
        if (it == ctx.end() || it->second.total <= 0.0) return 1.0 / vocab;
        const auto& adj = adjusted_[0];
        const auto a = adj.find(pack(std::span<const Id>(&word, 1)));
        const double count = a == adj.end() ? 0.0 : a->second;
        return std::max(count - discount_, 0.0) / it->second.total +
               discount_ * it->second.types / it->second.total / vocab;
    }
    const double lower = prob_ids(word, context.subspan(1));
    const auto& ctx = context_[k - 1];
    const auto cit = ctx.find(pack(context));
    if (cit == ctx.end() || cit->second.total <= 0.0) return lower;
    std::vector<Id> gram(context.begin(), context.end());
    gram.push_back(word);
    const auto& adj = adjusted_[k - 1];
    const auto a = adj.find(pack(gram));
    const double count = a == adj.end() ? 0.0 : a->second;
    return std::max(count - discount_, 0.0) / cit->second.total +
           discount_ * cit->second.types / cit->second.total * lower;
}

std::vector<std::string> NgramModel::vocabulary() const {
    return {id_to_word_.begin() + 1, id_to_word_.end()};
}

double NgramModel::prob(std::string_view word, std::span<const std::string> context) const {
    if (!trained()) throw InputError("n-gram model is not trained");
    std::vector<Id> ctx;
    const auto keep = std::min<std::size_t>(context.size(), static_cast<std::size_t>(order_ - 1));
    for (std::size_t i = context.size() - keep; i < context.size(); ++i) ctx.push_back(lookup(context[i]));
    return prob_ids(lookup(word), ctx);
}

std::vector<TokenScore> NgramModel::score(std::span<const std::string> tokens) const {
    if (!trained()) throw InputError("n-gram model is not trained");
    std::vector<Id> history{0};
    std::vector<TokenScore> out;
    out.reserve(tokens.size());
    const auto width = static_cast<std::size_t>(order_ - 1);
    for (const auto& t : tokens) {
        const Id id = lookup(t);
        const auto keep = std::min(history.size(), width);
        const double p = prob_ids(id, std::span<const Id>(history).subspan(history.size() - keep));
        out.push_back({t, std::log(p)});
        history.push_back(id);
    }
    return out;
}

std::vector<double> NgramModel::unigram_logprobs(std::span<const std::string> tokens) const {
    if (!trained()) throw InputError("n-gram model is not trained");
    std::vector<double> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(std::log(prob_ids(lookup(t), {})));
    return out;
}

void NgramModel::save(std::ostream& out) const {
    if (!trained()) throw InputError("n-gram model is not trained");
    out << "preempt-ngram 1\n";
    out << "order " << order_ << '\n';
    out.precision(17);
    out << "discount " << discount_ << '\n';
    out << "vocab " << id_to_word_.size() << '\n';
    for (const auto& w : id_to_word_) out << w << '\n';
    for (int k = 1; k <= order_; ++k) {
        const auto& raw = raw_[static_cast<std::size_t>(k - 1)];
        // sorted for byte-stable output
        std::vector<std::pair<std::vector<Id>, std::uint64_t>> rows;
        rows.reserve(raw.size());
        for (const auto& [key, c] : raw) {
            std::vector<Id> ids(key.size() / sizeof(Id));
            std::memcpy(ids.data(), key.data(), key.size());
            rows.emplace_back(std::move(ids), c);
        }
        std::sort(rows.begin(), rows.end());
        out << "ngrams " << k << ' ' << rows.size() << '\n';
        for (const auto& [ids, c] : rows) {
            for (std::size_t i = 0; i < ids.size(); ++i) out << (i ? " " : "") << ids[i];
            out << '\t' << c << '\n';
        }
    }
}

NgramModel NgramModel::load(std::istream& in, const std::string& source) {
    NgramModel m;
    std::string line;
    std::size_t lineno = 0;
    const auto next_line = [&]() -> std::string& {
        if (!std::getline(in, line)) throw ParseError(source, lineno, "unexpected end of n-gram model file");
        ++lineno;
        return line;
    };
    if (next_line() != "preempt-ngram 1") throw ParseError(source, lineno, "not a preempt n-gram model");
    std::string tag;
    {
        std::istringstream ss(next_line());
        if (!(ss >> tag >> m.order_) || tag != "order" || m.order_ < 1) throw ParseError(source, lineno, "bad order");
    }
    {
        std::istringstream ss(next_line());
        if (!(ss >> tag >> m.discount_) || tag != "discount") throw ParseError(source, lineno, "bad discount");
    }
    std::size_t vocab = 0;
    {
        std::istringstream ss(next_line());
        if (!(ss >> tag >> vocab) || tag != "vocab" || vocab < 3) throw ParseError(source, lineno, "bad vocab header");
    }
    for (std::size_t i = 0; i < vocab; ++i) m.intern(next_line());
    if (m.id_to_word_.size() != vocab) throw ParseError(source, lineno, "duplicate vocabulary entry");
    m.raw_.assign(static_cast<std::size_t>(m.order_), {});
    for (int k = 1; k <= m.order_; ++k) {
        std::size_t rows = 0;
        int kk = 0;
        {
            std::istringstream ss(next_line());
            if (!(ss >> tag >> kk >> rows) || tag != "ngrams" || kk != k) {
                throw ParseError(source, lineno, "bad n-gram section header");
            }
        }
        for (std::size_t r = 0; r < rows; ++r) {
            const auto& l = next_line();
            const auto tab = l.find('\t');
            if (tab == std::string::npos) throw ParseError(source, lineno, "bad n-gram row");
            std::istringstream ids_in(l.substr(0, tab));
            std::vector<Id> ids;
            Id id = 0;
            while (ids_in >> id) {
                if (id >= vocab) throw ParseError(source, lineno, "word id out of range");
                ids.push_back(id);
            }
            if (static_cast<int>(ids.size()) != k) throw ParseError(source, lineno, "n-gram has wrong order");
            m.raw_[static_cast<std::size_t>(k - 1)][pack(ids)] = std::stoull(l.substr(tab + 1));
        }
    }
    m.rebuild();
    return m;
}

NgramModel NgramModel::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open n-gram model: " + path);
    return load(in, path);
}

ScoreSet score_stimuli(const NgramModel& lm, const StimulusSet& stimuli, const std::string& model_id,
                       const std::optional<std::string>& condition) {
    ScoreSet out;
    for (const auto& entry : stimuli) {
        for (const auto& pair : instantiate_pairs(entry)) {
            for (auto role : {SurfaceRole::Conv, SurfaceRole::Unconv}) {
                const auto& sentence = role == SurfaceRole::Conv ? pair.conventional : pair.unconventional;
                const auto tokens = ngram_tokenize(sentence);
                std::vector<double> logprobs;
                for (const auto& t : lm.score(tokens)) logprobs.push_back(t.logprob);
                ScoreKey key{entry.lemma, entry.construction, pair.frame_index, role, condition};
                out.add(make_sentence_surprisal(std::move(key), model_id, tokens, std::move(logprobs),
                                                text::word_count(sentence)));
            }
        }
    }
    return out;
}

}  // namespace preempt
