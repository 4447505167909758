#pragma once

#include <stdexcept>
#include <string>

namespace pillowfold {

// Parameter outside a family's domain (or a malformed numeric input).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Bezier u(t) is not strictly increasing, so f(u) is not a function.
class NonMonotoneError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Curve violates |f'(u)| <= 1 beyond tolerance.
class InvalidCurveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Folded shape cannot be realized (ends collide, reflections cross).
class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotWatertightError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line, std::string field)
        : std::runtime_error(msg), line_(line), field_(std::move(field)) {}

    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    int line_;
    std::string field_;
};

class InfeasibleStartError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Objective could not be evaluated at a finite-difference probe.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace pillowfold
