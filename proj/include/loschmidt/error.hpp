#pragma once

#include <stdexcept>
#include <string>

namespace loschmidt {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input or violated precondition. The CLI maps these to exit code 1.
class ConfigError : public Error {
public:
    using Error::Error;
};

class SizeError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ParseError : public ConfigError {
public:
    ParseError(const std::string& what, int line)
        : ConfigError("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

/// Failure inside an engine or fit. The CLI maps these to exit code 2.
class NumericalError : public Error {
public:
    using Error::Error;
};

class DegenerateModeError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class UndefinedPeakError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class AmbiguousGroundStateError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SamplingError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InsufficientDataError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class RangeError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace loschmidt
