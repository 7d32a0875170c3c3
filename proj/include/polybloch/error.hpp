#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polybloch {

// Input outside the closed-form domain of an operation (|z| >= 1, NaN, zero
// direction, bad ladder, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Source text could not be turned into a map. position() is a 0-based byte
// offset into the source that was handed to the parser.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " (at offset " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Numerical failure while evaluating an expression at a point.
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PoleError : public EvalError {
public:
    using EvalError::EvalError;
};

class BranchError : public EvalError {
public:
    using EvalError::EvalError;
};

// A map sent a point to (or beyond) the boundary of the polydisc.
class EscapeError : public EvalError {
public:
    using EvalError::EvalError;
};

} // namespace polybloch
