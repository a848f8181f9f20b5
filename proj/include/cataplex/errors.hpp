#pragma once

#include <stdexcept>
#include <string>

namespace cataplex {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failures: the CLI maps these to exit code 3.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

class NonConvergence : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

class StepUnderflow : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

/// Argument outside the mathematical domain of an operation (e.g. x <= 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// No evaluation regime of the complex-order Bessel function covers the point.
class OutsideDomain : public DomainError {
public:
    using DomainError::DomainError;
};

class Overflow : public Error {
public:
    using Error::Error;
};

/// ln K is singular: the Bessel function vanishes at the requested point.
class BesselZero : public Error {
public:
    using Error::Error;
};

/// The gradient of ln|K| vanishes where a contour was to be traced.
class SaddlePoint : public Error {
public:
    using Error::Error;
};

class LeftDomain : public Error {
public:
    using Error::Error;
};

class Degenerate : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace cataplex
