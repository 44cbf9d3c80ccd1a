#pragma once

#include <stdexcept>
#include <string>

namespace jrcc {

/// Invalid input: a field or argument violates its invariant. The offending
/// field (dotted path, e.g. "interface.gap") is carried alongside the message.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Malformed external data (CSV / config text). Message includes the
/// 1-based line number where available.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_ = 0;
};

/// A fit could not produce a usable estimate (unidentifiable parameter,
/// degenerate data, bound-pinned minimizer treated as failure by callers).
class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace jrcc
