#pragma once

#include <stdexcept>
#include <string>

namespace fxcast {

// Error taxonomy mirrors the CLI exit codes: data errors exit 2,
// training errors 3, missing artifacts 4, backtest errors 5.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : Error {
    using Error::Error;
};

struct FormatError : DataError {
    using DataError::DataError;
};

struct InsufficientDataError : DataError {
    using DataError::DataError;
};

struct DomainError : DataError {
    using DataError::DataError;
};

struct TrainError : Error {
    using Error::Error;
};

struct NumericOverflowError : TrainError {
    using TrainError::TrainError;
};

struct DimensionError : Error {
    using Error::Error;
};

struct ArgumentError : Error {
    using Error::Error;
};

struct FetchError : DataError {
    using DataError::DataError;
};

}  // namespace fxcast
