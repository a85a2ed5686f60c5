#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lstraj {

// Raised for nonpositive durations, orders out of range and similar bad input.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when an evaluation time falls outside the trajectory span.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Raised by the banded factorization when a pivot column is exactly zero.
class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(std::size_t pivot, const std::string &what)
        : std::runtime_error(what), pivot_(pivot) {}

    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

} // namespace lstraj
