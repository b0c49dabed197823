#pragma once

#include <stdexcept>
#include <string>

namespace qmirror {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
public:
    DivisionByZero() : Error("division by zero") {}
};

/// Evaluation at s = 1 hit a pole of the rational function.
class PoleError : public Error {
public:
    PoleError() : Error("pole at s = 1") {}
};

class RingMismatch : public Error {
public:
    RingMismatch() : Error("base ring mismatch") {}
};

class NonNilpotent : public Error {
public:
    NonNilpotent() : Error("non-nilpotent Hamiltonian: scalar of base degree 0") {}
};

/// A configuration was not in general position; the caller should re-seed.
class PerturbRequired : public Error {
public:
    using Error::Error;
};

class InternalError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace qmirror
