#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qhj {

enum class ErrorKind {
  InvalidArgument,
  OutOfDomain,
  UnknownCatalogEntry,
  InconsistentEnergy,
  DegenerateICs,
  Overflow,
  ProportionalSolutions,
  NodalPoint,
  NodeSingularity,
  ZeroConjugateMomentum,
  ClassicalTurningPoint,
  NonRiemannianPoint,
  InconsistentInitialVelocity,
  ParseError,
  ValidationError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Base exception for every failure raised by the library. The kind is the
/// stable, machine-checkable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when some diagonal metric component is non-positive, so the
/// transformation Jacobian has no real square root. Signature holds -1/0/+1
/// per axis.
class NonRiemannianPoint : public Error {
 public:
  explicit NonRiemannianPoint(std::array<int, 3> signature);

  const std::array<int, 3>& signature() const noexcept { return signature_; }

 private:
  std::array<int, 3> signature_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message);

  int line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  int line_;
  std::string detail_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message);

  const std::string& field() const noexcept { return field_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string field_;
  std::string detail_;
};

/// Formats a signature as e.g. "(-,+,+)".
std::string signature_string(const std::array<int, 3>& signature);

}  // namespace qhj
