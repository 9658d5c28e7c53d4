#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace casimir {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Query outside the range covered by tabulated data.
class RangeError : public Error {
public:
    using Error::Error;
};

class LookupError : public Error {
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

/// Data that parsed but breaks an invariant. `row` is the 1-based data row.
class ValidationError : public Error {
public:
    ValidationError(std::size_t row, const std::string& what)
        : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class SingularityError : public Error {
public:
    using Error::Error;
};

/// Matsubara sum hit its ceiling before the truncation rule was met.
class ConvergenceError : public Error {
public:
    ConvergenceError(long m_max, double last_relative, const std::string& what)
        : Error(what), m_max_(m_max), last_relative_(last_relative) {}
    long m_max() const noexcept { return m_max_; }
    double last_relative() const noexcept { return last_relative_; }

private:
    long m_max_;
    double last_relative_;
};

/// Permittivity evaluation failed inside the Matsubara sum.
class EvaluationError : public Error {
public:
    EvaluationError(long m, double zeta, const std::string& what)
        : Error(what), m_(m), zeta_(zeta) {}
    long m() const noexcept { return m_; }
    double zeta() const noexcept { return zeta_; }

private:
    long m_;
    double zeta_;
};

/// Feature not available for the given inputs (e.g. grouping of custom materials).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// A computation failure tagged with the scenario cell (pair, gap, temperature) it came from.
class ScenarioError : public Error {
public:
    ScenarioError(std::string context, const std::string& cause)
        : Error(context + ": " + cause), context_(std::move(context)) {}
    const std::string& context() const noexcept { return context_; }

private:
    std::string context_;
};

}  // namespace casimir
