#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace paracert {

// Base of every exception the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the operation's domain (even input to an odd-only selector, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Value beyond the supported 64-bit range.
class UnsupportedError : public Error {
public:
    using Error::Error;
};

// Requested allocation exceeds the configured memory budget.
class ResourceError : public Error {
public:
    using Error::Error;
};

// Checked arithmetic would have wrapped.
class OverflowError : public Error {
public:
    using Error::Error;
};

// parallelogram_solve received values that do not divide exactly.
class MalformedInstance : public Error {
public:
    using Error::Error;
};

// No Goldbach decomposition exists for an even number in range. This would
// falsify the conjecture, so callers must abort the whole run.
class GoldbachFailure : public Error {
public:
    explicit GoldbachFailure(std::uint64_t m)
        : Error("no Goldbach decomposition found for " + std::to_string(m)), m_(m) {}
    std::uint64_t even_number() const noexcept { return m_; }

private:
    std::uint64_t m_;
};

// A derivation component fell above the induction frontier.
class BoundViolation : public Error {
public:
    using Error::Error;
};

// Broken internal invariant (a bug, or a falsified lemma).
class InternalError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Spot check disagreed with an algebraic identity; indicates a checker bug.
class FatalInconsistency : public Error {
public:
    using Error::Error;
};

}  // namespace paracert
