#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace preempt {

// Bad or inconsistent input: malformed files, missing keys, violated
// preconditions. The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input tied to a location in a file (1-based line number).
class ParseError : public InputError {
public:
    ParseError(std::string source, std::size_t line, const std::string& what)
        : InputError(source + ":" + std::to_string(line) + ": " + what),
          source_(std::move(source)), line_(line) {}

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

// A statistic is undefined for the data it was given (zero variance,
// perfect collinearity, empty totals). The CLI maps this to exit code 2.
class DegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace preempt
