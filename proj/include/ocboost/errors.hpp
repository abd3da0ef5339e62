#pragma once

#include <stdexcept>
#include <string>

namespace ocboost {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed arguments: empty inputs, labels outside {-1,+1}, size mismatches.
class InvalidInput : public Error {
public:
    using Error::Error;
};

// A learner configuration that cannot be honoured (e.g. cold start with zero smoothing).
class InvalidConfig : public Error {
public:
    using Error::Error;
};

// Data files that do not parse: bad magic, truncation, schema mismatch.
class FormatError : public Error {
public:
    using Error::Error;
};

// Weak-learner search produced nothing usable.
class SelectionFailure : public Error {
public:
    using Error::Error;
};

// A metric that is not defined for its input (zero vector, single-class labels).
class UndefinedMetric : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

// log-ratio with an empty side and no smoothing.
class UnboundedAlpha : public NumericError {
public:
    using NumericError::NumericError;
};

class NumericOverflow : public NumericError {
public:
    using NumericError::NumericError;
};

class DivisionByZero : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace ocboost
