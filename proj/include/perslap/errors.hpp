#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace perslap {

/// Base for every precondition violation raised by the library.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class WeightDomainError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Input complex has simplices of a dimension the operation cannot accept.
class DimensionError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Non-finite entries, or a matrix that should be PSD but is clearly not.
class NumericDomainError : public DomainError {
public:
    using DomainError::DomainError;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace perslap
