#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gbvar {

/// Base of every error raised by the library. `what()` starts with the
/// error kind, e.g. "ConstraintViolation: row 1 residual 0.1".
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: malformed parameters, files, or flags. CLI exit code 2.
class UserError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a trustworthy result. CLI exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Rows and columns in messages are 1-based; the stored fields are 0-based.

class ConstraintViolation : public UserError {
 public:
  ConstraintViolation(std::size_t row, double residual)
      : UserError("ConstraintViolation: row " + std::to_string(row + 1) + " residual " +
                  std::to_string(residual)),
        row(row),
        residual(residual) {}
  std::size_t row;
  double residual;
};

class NonpositiveBeta : public UserError {
 public:
  explicit NonpositiveBeta(std::size_t row)
      : UserError("NonpositiveBeta: row " + std::to_string(row + 1)), row(row) {}
  std::size_t row;
};

class InnovationMeanOutOfRange : public UserError {
 public:
  explicit InnovationMeanOutOfRange(std::size_t index)
      : UserError("InnovationMeanOutOfRange: coordinate " + std::to_string(index + 1)),
        index(index) {}
  std::size_t index;
};

class UnknownPreset : public UserError {
 public:
  explicit UnknownPreset(const std::string& name) : UserError("UnknownPreset: " + name) {}
};

class ShapeMismatch : public UserError {
 public:
  explicit ShapeMismatch(const std::string& what) : UserError("ShapeMismatch: " + what) {}
};

class PanelTooShort : public UserError {
 public:
  explicit PanelTooShort(std::size_t n)
      : UserError("PanelTooShort: " + std::to_string(n) + " rows"), n(n) {}
  std::size_t n;
};

class NotBinary : public UserError {
 public:
  NotBinary(std::size_t row, std::size_t col)
      : UserError("NotBinary: row " + std::to_string(row + 1) + " column " +
                  std::to_string(col + 1)),
        row(row),
        col(col) {}
  std::size_t row;
  std::size_t col;
};

class NonNumericCell : public UserError {
 public:
  NonNumericCell(std::size_t row, std::size_t col)
      : UserError("NonNumericCell: row " + std::to_string(row + 1) + " column " +
                  std::to_string(col + 1)) {}
};

class EmptyColumn : public UserError {
 public:
  explicit EmptyColumn(std::size_t col)
      : UserError("EmptyColumn: column " + std::to_string(col + 1)) {}
};

class InvalidLevel : public UserError {
 public:
  explicit InvalidLevel(double alpha)
      : UserError("InvalidLevel: alpha must lie in (0,1), got " + std::to_string(alpha)) {}
};

class InvalidArgument : public UserError {
 public:
  explicit InvalidArgument(const std::string& what) : UserError("InvalidArgument: " + what) {}
};

class FormatError : public UserError {
 public:
  explicit FormatError(const std::string& what) : UserError("FormatError: " + what) {}
};

class DimensionTooLarge : public UserError {
 public:
  explicit DimensionTooLarge(std::size_t d)
      : UserError("DimensionTooLarge: d=" + std::to_string(d) + " exceeds the oracle limit") {}
};

class SingularSystem : public NumericalError {
 public:
  explicit SingularSystem(const std::string& what) : NumericalError("SingularSystem: " + what) {}
};

class SingularCovariance : public NumericalError {
 public:
  explicit SingularCovariance(double rcond)
      : NumericalError("SingularCovariance: reciprocal condition " + std::to_string(rcond)),
        rcond(rcond) {}
  double rcond;
};

class CovarianceNotPSD : public NumericalError {
 public:
  explicit CovarianceNotPSD(const std::string& what)
      : NumericalError("CovarianceNotPSD: " + what) {}
};

class NotIrreducible : public NumericalError {
 public:
  NotIrreducible() : NumericalError("NotIrreducible: some transition probability is 0 or 1") {}
};

}  // namespace gbvar
