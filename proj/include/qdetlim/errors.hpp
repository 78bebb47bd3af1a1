// errors.hpp — exception types shared by every qdetlim module.

#pragma once

#include <stdexcept>
#include <string>

namespace qdetlim {

// Base of everything the library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller supplied something outside an operation's domain (bad grid, bad
// prior, malformed configuration). The CLI maps these to exit code 2.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Computation ran but its result cannot be trusted (non-PSD kernel, path
// disagreement, non-finite objective). The CLI maps these to exit code 1.
class NumericalError : public Error {
public:
    using Error::Error;
};

// An integrand has not decayed at the edge of the frequency grid and strict
// mode is on.
class BandwidthError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// A receiver was requested for a detector whose output still carries
// backaction noise.
class ReceiverUnavailable : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

}  // namespace qdetlim
