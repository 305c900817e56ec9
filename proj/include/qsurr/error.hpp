#pragma once

#include <stdexcept>
#include <string>

namespace qsurr {

/// Error categories. The CLI maps each to a distinct exit code.
enum class ErrorKind {
  Usage = 1,
  Io = 2,
  Numerical = 3,
  Precondition = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string name, const std::string& what)
      : std::runtime_error(what), kind_(kind), name_(std::move(name)) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Stable machine-readable identifier, e.g. "CapExceeded".
  const std::string& name() const noexcept { return name_; }

 private:
  ErrorKind kind_;
  std::string name_;
};

struct PreconditionError : Error {
  explicit PreconditionError(const std::string& what)
      : Error(ErrorKind::Precondition, "PreconditionViolated", what) {}
  PreconditionError(std::string name, const std::string& what)
      : Error(ErrorKind::Precondition, std::move(name), what) {}
};

struct ShapeError : Error {
  explicit ShapeError(const std::string& what)
      : Error(ErrorKind::Precondition, "ShapeMismatch", what) {}
};

struct IoError : Error {
  explicit IoError(const std::string& what) : Error(ErrorKind::Io, "IoError", what) {}
  IoError(std::string name, const std::string& what)
      : Error(ErrorKind::Io, std::move(name), what) {}
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::Numerical, "NumericalError", what) {}
  NumericalError(std::string name, const std::string& what)
      : Error(ErrorKind::Numerical, std::move(name), what) {}
};

/// The full lattice (or grid) is larger than the caller allows to materialize.
struct CapExceeded : Error {
  explicit CapExceeded(const std::string& what)
      : Error(ErrorKind::Numerical, "CapExceeded", what) {}
};

/// More distinct frequencies were requested than the canonical lattice holds.
struct InsufficientSpectrum : Error {
  explicit InsufficientSpectrum(const std::string& what)
      : Error(ErrorKind::Precondition, "InsufficientSpectrum", what) {}
};

/// The error target exceeds sigma_p * diameter.
struct DomainTooSmall : Error {
  explicit DomainTooSmall(const std::string& what)
      : Error(ErrorKind::Precondition, "DomainTooSmall", what) {}
};

}  // namespace qsurr
