#pragma once

#include <stdexcept>
#include <string>

namespace tsskew {

// Invalid model parameters or arguments outside the domain of a formula.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Option price outside the no-arbitrage bounds.
struct OutOfBounds : std::domain_error {
    using std::domain_error::domain_error;
};

struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Data errors raised by the chain pipeline.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : DataError {
    ParseError(const std::string& msg, std::size_t line)
        : DataError("line " + std::to_string(line) + ": " + msg), line_no(line) {}
    std::size_t line_no;
};

struct SchemaError : DataError {
    using DataError::DataError;
};

struct InsufficientQuotes : DataError {
    using DataError::DataError;
};

struct MissingWing : DataError {
    using DataError::DataError;
};

struct SignMixError : DataError {
    using DataError::DataError;
};

}  // namespace tsskew
