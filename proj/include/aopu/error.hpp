#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace aopu {

// Root of every error the library raises. Each subclass maps onto one of the
// error kinds named in the operation contracts so callers can catch narrowly.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

// SVD non-convergence and similar failures of a numerical routine.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

// A non-finite loss, gradient or parameter. Carries the rank ratio of the
// batch that produced it, when one is known.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::optional<double> rank_ratio = std::nullopt)
        : Error(what), rank_ratio_(rank_ratio) {}

    std::optional<double> rank_ratio() const noexcept { return rank_ratio_; }

private:
    std::optional<double> rank_ratio_;
};

// p(x_query) = 0 for a discrete conditional-mean query.
class UndefinedConditional : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

// Data ingestion errors. Distinct types so a loader caller can tell a short
// row from a bad cell from an empty file.
class DataError : public Error {
public:
    using Error::Error;
};

class EmptyFile : public DataError {
public:
    using DataError::DataError;
};

class WrongColumnCount : public DataError {
public:
    using DataError::DataError;
};

class NonNumericCell : public DataError {
public:
    using DataError::DataError;
};

class ZeroVariance : public DataError {
public:
    using DataError::DataError;
};

}  // namespace aopu
