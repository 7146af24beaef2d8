#pragma once

#include <stdexcept>
#include <string>

namespace osmlelm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Factorization broke down: singular, indefinite, or non-finite results.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Malformed input file or invalid dataset contents.
class DataError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration value (bad count, unknown enum tag, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace osmlelm
