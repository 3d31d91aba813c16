// error.hpp -- exception taxonomy shared by all modules.
//
// The CLI maps these onto exit codes: configuration problems exit 2,
// numerical failures (singular solves, ESP violations, non-finite values)
// exit 3, and a clean run whose verdict is "fail" exits 1.

#ifndef QSAS_ERROR_HPP
#define QSAS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qsas {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched or unusable dimensions (non-square input, length mismatch, ...).
class ShapeError : public Error {
public:
  explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Input violates a required symmetry (e.g. a non-Hermitian matrix passed to
// the Hermitian eigensolver).
class SymmetryError : public Error {
public:
  explicit SymmetryError(const std::string& msg) : Error(msg) {}
};

// Scalar parameter outside its documented range.
class DomainError : public Error {
public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Elimination hit a pivot below the singularity floor; carries the index of
// the failing pivot so callers can report which unknown went bad.
class SingularMatrixError : public Error {
public:
  SingularMatrixError(const std::string& msg, int pivot)
      : Error(msg + " (pivot index " + std::to_string(pivot) + ")"),
        pivot_index(pivot) {}
  int pivot_index;
};

// NaN/Inf or other numerical breakdown.
class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& msg) : Error(msg) {}
};

// Requested an operation that requires the echo state property on a system
// whose state map is not a contraction on the sampled domain.
class EspViolationError : public Error {
public:
  explicit EspViolationError(const std::string& msg) : Error(msg) {}
};

// Problems parsing or validating a run configuration.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace qsas

#endif // QSAS_ERROR_HPP
