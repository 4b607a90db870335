#pragma once

#include <stdexcept>
#include <string>

namespace dendro {

/// Base class for every error the library raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument violates an operation's contract: dimension mismatch,
/// unknown id, parameter out of range, non-finite value, ...
class InvalidInputError : public Error {
public:
    using Error::Error;
};

/// Input is structurally fine but too small or too uniform to process
/// (fewer than two objects, homogeneous similarities under an automatic cut).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// A file could not be parsed. The message names the offending line.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Parsed data breaks a matrix invariant beyond repair tolerance
/// (asymmetry, out-of-range cell). The message names the cell.
class DataInvariantError : public Error {
public:
    using Error::Error;
};

/// A brute-force reference implementation was asked to handle more data
/// than it is meant for.
class OracleScopeError : public Error {
public:
    using Error::Error;
};

}  // namespace dendro
