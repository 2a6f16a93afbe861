#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace symtrack {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value or sequence violates a domain invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

class EmptyScoreError : public ValidationError {
public:
    EmptyScoreError() : ValidationError("score sequence is empty") {}
    using ValidationError::ValidationError;
};

class NonIncreasingOnsetsError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class EmptyPitchSetError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DegenerateTempoCurveError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Malformed input file. Carries the 1-based source line when known
/// (0 for binary or whole-file failures).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
    ParseError(const std::string& file, std::size_t line, const std::string& what)
        : Error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_ = 0;
};

/// The MIDI file uses SMPTE time division; only metrical division is supported.
class UnsupportedDivisionError : public ParseError {
public:
    using ParseError::ParseError;
};

/// A note arrived earlier than its predecessor by more than the reorder tolerance.
class OutOfOrderInputError : public Error {
public:
    using Error::Error;
};

/// The tracking session was closed; no further notes are accepted.
class SessionEndedError : public Error {
public:
    using Error::Error;
};

/// Position queried before any note was tracked.
class NoMatchYetError : public Error {
public:
    NoMatchYetError() : Error("no note has been tracked yet") {}
};

/// Evaluation requested on an empty match trace.
class NoMatchesError : public Error {
public:
    NoMatchesError() : Error("match trace is empty") {}
};

/// The replay sink refused a delivery.
class SinkClosedError : public Error {
public:
    SinkClosedError() : Error("note sink closed during replay") {}
};

}  // namespace symtrack
