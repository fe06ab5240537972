#pragma once

#include <stdexcept>
#include <string>

namespace qsr {

// Base class for all errors raised by this library. The CLI maps these to
// exit codes: input/parameter problems -> 2, numeric problems -> 3.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched or oversized dimensions (tensor cap, partial trace factors, ...).
class DimensionError : public Error {
public:
  using Error::Error;
};

// Bad user-supplied parameter (eps out of range, unknown flag, ...).
class ParameterError : public Error {
public:
  using Error::Error;
};

// Malformed input data (state files, invalid ensembles, ...).
class InputError : public Error {
public:
  using Error::Error;
};

// Operator fails a structural precondition (non-Hermitian, not PSD, ...).
class ContractError : public Error {
public:
  using Error::Error;
};

// Iterative solver failed to reach its tolerance within the iteration cap.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

}  // namespace qsr
