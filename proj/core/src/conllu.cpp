#include "preempt/conllu.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include "preempt/error.hpp"
#include "preempt/text.hpp"

namespace preempt {

std::optional<std::string> ParsedSentence::structural_error() const {
    if (tokens.empty()) return "sentence has no tokens";
    int roots = 0;
    const int n = static_cast<int>(tokens.size());
    for (int i = 0; i < n; ++i) {
        const auto& t = tokens[static_cast<std::size_t>(i)];
        if (t.head < 0 || t.head > n) {
            return "token " + std::to_string(i + 1) + " has head " + std::to_string(t.head) + " out of range";
        }
        if (t.head == i + 1) return "token " + std::to_string(i + 1) + " is its own head";
        if (t.head == 0) ++roots;
    }
    if (roots != 1) return "expected exactly one root, found " + std::to_string(roots);
    return std::nullopt;
}

std::vector<std::size_t> ParsedSentence::children(std::size_t index) const {
    std::vector<std::size_t> out;
    const int head = static_cast<int>(index) + 1;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (tokens[i].head == head) out.push_back(i);
    }
    return out;
}

ConlluReader::ConlluReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

namespace {

bool parse_int(const std::string& s, int& out) {
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace

std::optional<ConlluRecord> ConlluReader::next() {
    std::string line;
    ConlluRecord rec;
    ParsedSentence s;
    bool started = false;
    bool failed = false;
    int expected_id = 1;

    const auto fail = [&](const std::string& msg) {
        if (!failed) {
            rec.error = msg + " (line " + std::to_string(lineno_) + ")";
            failed = true;
        }
    };

    while (std::getline(in_, line)) {
        ++lineno_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::trim(line).empty()) {
            if (started) break;
            continue;
        }
        if (!started) {
            started = true;
            rec.line = lineno_;
        }
        if (failed) continue;
        if (line.front() == '#') {
            const auto body = text::trim(std::string_view(line).substr(1));
            const auto eq = body.find('=');
            if (eq == std::string_view::npos) continue;
            const std::string key(text::trim(body.substr(0, eq)));
            const std::string value(text::trim(body.substr(eq + 1)));
            if (key == "sent_id") {
                s.id = value;
            } else if (key == "text") {
                s.text = value;
            } else if (key == "confidence") {
                try {
                    std::size_t used = 0;
                    s.parse_confidence = std::stod(value, &used);
                    if (used != value.size() || s.parse_confidence < 0.0 || s.parse_confidence > 1.0) {
                        fail("confidence must be a number in [0, 1]");
                    }
                } catch (const std::exception&) {
                    fail("confidence must be a number in [0, 1]");
                }
            } else if (key == "boilerplate") {
                const auto l = text::to_lower(value);
                if (l == "true" || l == "1" || l == "yes") {
                    s.boilerplate = true;
                } else if (l == "false" || l == "0" || l == "no") {
                    s.boilerplate = false;
                } else {
                    fail("boilerplate must be true or false");
                }
            } else {
                s.metadata[key] = value;
            }
            continue;
        }
        const auto cols = text::split(line, '\t');
        if (cols.size() != 10) {
            fail("expected 10 tab-separated columns, got " + std::to_string(cols.size()));
            continue;
        }
        if (cols[0].find('-') != std::string::npos || cols[0].find('.') != std::string::npos) continue;
        int id = 0;
        int head = 0;
        if (!parse_int(cols[0], id) || id != expected_id) {
            fail("token id '" + cols[0] + "' out of sequence");
            continue;
        }
        if (!parse_int(cols[6], head)) {
            fail("head '" + cols[6] + "' is not an integer");
            continue;
        }
        ++expected_id;
        s.tokens.push_back({cols[1], cols[2], cols[3], head, cols[7]});
    }
    if (!started) return std::nullopt;
    if (!failed) {
        if (auto err = s.structural_error()) fail(*err);
    }
    if (failed) {
        rec.error = source_ + ": " + rec.error;
        return rec;
    }
    if (s.id.empty()) s.id = source_ + ":" + std::to_string(rec.line);
    rec.sentence = std::move(s);
    return rec;
}

std::vector<ParsedSentence> read_conllu_strict(std::istream& in, const std::string& source) {
    ConlluReader reader(in, source);
    std::vector<ParsedSentence> out;
    while (auto rec = reader.next()) {
        if (!rec->sentence) throw ParseError(source, rec->line, rec->error);
        out.push_back(std::move(*rec->sentence));
    }
    return out;
}

void write_conllu(std::ostream& out, const ParsedSentence& s) {
    if (!s.id.empty()) out << "# sent_id = " << s.id << '\n';
    if (!s.text.empty()) out << "# text = " << s.text << '\n';
    if (s.parse_confidence != 1.0) out << "# confidence = " << s.parse_confidence << '\n';
    if (s.boilerplate) out << "# boilerplate = true\n";
    for (const auto& [k, v] : s.metadata) out << "# " << k << " = " << v << '\n';
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        const auto& t = s.tokens[i];
        out << (i + 1) << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos << "\t_\t_\t" << t.head << '\t'
            << t.deprel << "\t_\t_\n";
    }
    out << '\n';
}

}  // namespace preempt
