#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace finsler {

// Byte offsets [start, end) into an expression source.
struct SourceSpan {
    std::size_t start = 0;
    std::size_t end = 0;
};

// Bad input: malformed expressions, specs, files, flags.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The computation itself failed: domain violations, singular matrices,
// non-convergence.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
public:
    ParseError(const std::string& message, SourceSpan span)
        : InputError(message + " at [" + std::to_string(span.start) + ", " +
                     std::to_string(span.end) + ")"),
          span_(span) {}

    SourceSpan span() const { return span_; }

private:
    SourceSpan span_;
};

class DomainError : public NumericalError {
public:
    explicit DomainError(const std::string& message, SourceSpan span = {}, bool has_span = false)
        : NumericalError(message), span_(span), has_span_(has_span) {}

    SourceSpan span() const { return span_; }
    bool has_span() const { return has_span_; }

private:
    SourceSpan span_;
    bool has_span_;
};

class SingularMatrixError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace finsler
