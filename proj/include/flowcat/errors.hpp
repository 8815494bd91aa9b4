#pragma once

#include <stdexcept>
#include <string>

namespace flowcat {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class SignInconsistency : public Error {
public:
    using Error::Error;
};

class NoAtom : public Error {
public:
    using Error::Error;
};

class BadPair : public Error {
public:
    using Error::Error;
};

// Raised for inconsistencies in computed results rather than bad input.
class ComputationError : public Error {
public:
    using Error::Error;
};

class OrderViolation : public ComputationError {
public:
    using ComputationError::ComputationError;
};

class NotAComplex : public ComputationError {
public:
    using ComputationError::ComputationError;
};

class NotInvertible : public ComputationError {
public:
    using ComputationError::ComputationError;
};

}  // namespace flowcat
