#pragma once

#include <stdexcept>
#include <string>

namespace glcert {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (R <= R0, R beyond the lattice, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Tabulated lookup outside the sampled radius range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Per-site / per-link array does not match the lattice it is used with.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Requested combination is valid input but not handled (alpha = 2 closed form, tabulated tails).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Parameters outside the regime an inequality is stated for.
class RegimeError : public Error {
public:
    using Error::Error;
};

/// Non-finite energy or gradient during minimization.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// Malformed configuration, snapshot or field description.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace glcert
