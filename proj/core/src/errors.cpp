#include "qhj/errors.hpp"

namespace qhj {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::UnknownCatalogEntry: return "UnknownCatalogEntry";
    case ErrorKind::InconsistentEnergy: return "InconsistentEnergy";
    case ErrorKind::DegenerateICs: return "DegenerateICs";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::ProportionalSolutions: return "ProportionalSolutions";
    case ErrorKind::NodalPoint: return "NodalPoint";
    case ErrorKind::NodeSingularity: return "NodeSingularity";
    case ErrorKind::ZeroConjugateMomentum: return "ZeroConjugateMomentum";
    case ErrorKind::ClassicalTurningPoint: return "ClassicalTurningPoint";
    case ErrorKind::NonRiemannianPoint: return "NonRiemannianPoint";
    case ErrorKind::InconsistentInitialVelocity: return "InconsistentInitialVelocity";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

std::string signature_string(const std::array<int, 3>& signature) {
  std::string out = "(";
  for (std::size_t i = 0; i < signature.size(); ++i) {
    if (i > 0) out += ',';
    out += signature[i] > 0 ? '+' : (signature[i] < 0 ? '-' : '0');
  }
  out += ')';
  return out;
}

NonRiemannianPoint::NonRiemannianPoint(std::array<int, 3> signature)
    : Error(ErrorKind::NonRiemannianPoint,
            "metric signature " + signature_string(signature) + " has no real Jacobian"),
      signature_(signature) {}

ParseError::ParseError(int line, const std::string& message)
    : Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + message),
      line_(line),
      detail_(message) {}

ValidationError::ValidationError(std::string field, const std::string& message)
    : Error(ErrorKind::ValidationError, field + ": " + message),
      field_(std::move(field)),
      detail_(message) {}

}  // namespace qhj
