#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stolfv {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class InvalidMesh : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of a function (e.g. a mean of a
/// non-positive number).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Operation not defined for the given input (e.g. derivatives of min/max means).
class Unsupported : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// A problem field (V, f, kappa, Dirichlet data) produced a non-finite value.
class ProblemEvaluationError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class NonConvergence : public NumericError {
public:
    NonConvergence(const std::string& what, double best_residual)
        : NumericError(what), best_residual_(best_residual) {}
    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

/// The reference (shooting) solver could not produce a trustworthy answer.
class OracleFailure : public NumericError {
public:
    using NumericError::NumericError;
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& what, std::size_t offset)
        : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class EvalError : public Error {
public:
    using Error::Error;
};

}  // namespace stolfv
