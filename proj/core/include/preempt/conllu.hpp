#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace preempt {

struct Token {
    std::string form;
    std::string lemma;
    std::string upos;
    int head = 0;  // 1-based; 0 = root
    std::string deprel;
};

struct ParsedSentence {
    std::string id;
    std::string text;
    std::vector<Token> tokens;
    double parse_confidence = 1.0;
    bool boilerplate = false;
    std::map<std::string, std::string> metadata;  // remaining "# key = value" comments

    /// Empty when well formed; otherwise a description of the first problem
    /// (head out of range, zero or several roots, no tokens).
    std::optional<std::string> structural_error() const;

    /// 0-based indices of the dependents of token `index` (0-based), in order.
    std::vector<std::size_t> children(std::size_t index) const;
};

/// One blank-line-delimited block of a CoNLL-U stream. Exactly one of
/// `sentence` / `error` is meaningful.
struct ConlluRecord {
    std::optional<ParsedSentence> sentence;
    std::string error;
    std::size_t line = 0;  // first line of the block
};

/// Streaming CoNLL-U reader. Multiword-token ranges (1-2) and empty nodes
/// (1.1) are skipped. Recognised comments: `# sent_id`, `# text`,
/// `# confidence = <float>`, `# boilerplate = true|false`.
class ConlluReader {
public:
    explicit ConlluReader(std::istream& in, std::string source = "<stream>");

    /// Next block, or nullopt at end of input. Malformed blocks are returned
    /// as records carrying an error instead of throwing.
    std::optional<ConlluRecord> next();

    const std::string& source() const noexcept { return source_; }

private:
    std::istream& in_;
    std::string source_;
    std::size_t lineno_ = 0;
};

/// Read every well-formed sentence; throws ParseError on the first malformed block.
std::vector<ParsedSentence> read_conllu_strict(std::istream& in, const std::string& source = "<stream>");

void write_conllu(std::ostream& out, const ParsedSentence& s);

}  // namespace preempt
