#pragma once

#include <stdexcept>
#include <string>

namespace lpa {

/// Malformed input text (graph files, expressions, literals).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// Well-formed input that violates a mathematical precondition.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A comparison involving continuous trails could not be settled within the
/// configured prefix bound.
class UndecidedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace lpa
