#ifndef ANYSYN_ERRORS_HPP
#define ANYSYN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace anysyn {

/// Base class of all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text: unknown keywords, bad tokens, references to
/// undeclared identifiers. Carries the 1-based source line when known.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& message, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    int line() const { return line_; }

private:
    int line_ = 0;
};

/// Structurally well-formed input that violates a model invariant
/// (row sums, nondeterminism, empty action sets, roster mismatches, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace anysyn

#endif
