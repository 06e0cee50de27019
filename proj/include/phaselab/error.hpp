#pragma once

#include <stdexcept>
#include <string>

namespace phaselab {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An input lies outside the domain of an operation (chart, tolerance, range).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical certificate failed: residual, overlap or flux gate.
class GateError : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid external input (JSON documents, CLI text).
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace phaselab
