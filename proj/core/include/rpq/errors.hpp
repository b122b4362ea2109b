#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rpq {

/// Base class of every error thrown by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (graph, automaton, query, walk or CNF files).
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// An instance-size guard tripped before the operation finished. The engine
/// refuses to start exponential searches on instances above the configured
/// bounds instead of hanging.
class GuardError : public Error {
public:
    using Error::Error;
};

/// The arguments violate an operation precondition (mismatched endpoints,
/// wrong query kind for a semantics, non-trim automaton, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

} // namespace rpq
