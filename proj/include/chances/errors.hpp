#pragma once

#include <stdexcept>
#include <string>

namespace chances {

// Inputs outside an operation's domain. The CLI maps these to exit status 3.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A characteristic polynomial with repeated (or numerically coincident) roots.
class DegenerateSpectrum : public DomainError {
public:
    using DomainError::DomainError;
};

// A life-table file that fails validation; carries the 1-based line number.
class TableFormatError : public DomainError {
public:
    TableFormatError(std::size_t line, const std::string& what)
        : DomainError("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A computed result violated an internal consistency check (e.g. a closed
// form that should be real came out with an imaginary residue).
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace chances
