#pragma once

#include <stdexcept>
#include <string>

namespace hyperma {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// A non-real residue survived where hyperhermitian symmetry forces a real value.
class ImaginaryResidueError : public Error {
public:
    using Error::Error;
};

// Input that violates a mathematical precondition (not a permutation, not
// positive definite, non-positive epsilon, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

class NotPositiveDefiniteError : public PreconditionError {
public:
    using PreconditionError::PreconditionError;
};

// Finite-difference stencil would leave the lattice.
class MarginError : public Error {
public:
    using Error::Error;
};

// Malformed file or JSON document; message carries the location.
class FormatError : public Error {
public:
    using Error::Error;
};

// A construction or verification could not be completed.
class ConstructionError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    using Error::Error;
};

}  // namespace hyperma
