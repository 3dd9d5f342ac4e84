#pragma once

#include <stdexcept>
#include <string>

namespace ctcoul {

// Thrown when exact-rational and floating scalars meet in one arithmetic
// expression. The caller must convert explicitly; silent promotion would
// destroy the exactness guarantees the rational field exists to provide.
class FieldMismatchError : public std::logic_error {
public:
    explicit FieldMismatchError(const std::string& what)
        : std::logic_error(what) {}
};

// Input violates a documented precondition (division by zero, r <= 0,
// non-isolating interval, mismatched indeterminates, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what)
        : std::invalid_argument(what) {}
};

// An iterative solve exhausted its budget. The message carries the
// diagnostics (dimensions tried, last residuals) so a caller can report
// something actionable instead of a bare failure.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what)
        : std::runtime_error(what) {}
};

} // namespace ctcoul
