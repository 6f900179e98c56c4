#pragma once

#include <stdexcept>
#include <string>

namespace symtherm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a precondition (bad shape, unnormalized weights, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed to converge within its budget.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Filesystem or serialization failure.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace symtherm
