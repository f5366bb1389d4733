#pragma once

#include <stdexcept>

namespace oamc {

// Base type for all library failures.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mixing elements that belong to different field specs.
struct FieldMismatchError : Error {
  using Error::Error;
};

// Invalid field or code parameters; the message names the violated constraint.
struct ParamError : Error {
  using Error::Error;
};

// Index or shape mismatch between an argument and the code instance.
struct DimensionError : Error {
  using Error::Error;
};

// Inverting zero, or an index outside the element enumeration.
struct ArithmeticError : Error {
  using Error::Error;
};

// Erasure decoding failure: too many erasures or inconsistent known cells.
struct DecodeError : Error {
  using Error::Error;
};

// Repair failure: bad helper set, missing reads, or an off-plan access.
struct RepairError : Error {
  using Error::Error;
};

// Verification work estimate exceeds the configured budget.
struct BudgetError : Error {
  using Error::Error;
};

// Chunk file format failures, one subtype per distinct condition.
struct ChunkError : Error {
  using Error::Error;
};
struct ChunkMagicError : ChunkError {
  using ChunkError::ChunkError;
};
struct ChunkVersionError : ChunkError {
  using ChunkError::ChunkError;
};
struct ChunkCrcError : ChunkError {
  using ChunkError::ChunkError;
};
struct ChunkTruncatedError : ChunkError {
  using ChunkError::ChunkError;
};

// File striping precondition failure (e.g. prime field in file mode).
struct StripingError : Error {
  using Error::Error;
};

}  // namespace oamc
