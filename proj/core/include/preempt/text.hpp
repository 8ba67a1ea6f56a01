#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace preempt::text {

std::vector<std::string> split(std::string_view s, char delim);
std::vector<std::string> split_whitespace(std::string_view s);
std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);

/// Whitespace-delimited word count with terminal punctuation stripped from
/// each word; tokens that are pure punctuation do not count.
int word_count(std::string_view sentence);

/// Strip leading and trailing ASCII punctuation from a word.
std::string strip_punct(std::string_view word);

}  // namespace preempt::text
