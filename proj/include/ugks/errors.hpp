#pragma once

#include <stdexcept>
#include <string>

namespace ugks {

// Invalid user input (bad config, unknown case). Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Anything that goes wrong while computing. Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class OverflowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class RealizabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InstabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace ugks
