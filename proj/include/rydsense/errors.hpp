#pragma once

#include <stdexcept>
#include <string>

namespace rydsense {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

// coupling graph is not a ladder
class StructuralError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class RangeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

class DegenerateSteadyStateError : public SolverError {
public:
    using SolverError::SolverError;
};

class NoPeakError : public Error {
public:
    using Error::Error;
};

class UnresolvedSplittingError : public Error {
public:
    using Error::Error;
};

class UnmeasurableError : public Error {
public:
    using Error::Error;
};

class UndefinedSnrError : public Error {
public:
    using Error::Error;
};

}  // namespace rydsense
