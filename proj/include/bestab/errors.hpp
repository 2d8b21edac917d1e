#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bestab {

enum class ErrorKind {
  Syntax,
  UnknownIdentifier,
  Domain,
  Schema,
  NotAnEquilibrium,
  TangentRightField,
  DegenerateGradient,
  NotOnSurface,
  NotOnTangencyCurve,
  DegenerateSliding,
  NearDegenerate,
  NoZeroEigenvalue,
  ConstraintViolation,
  EigenvalueOrderViolation,
  NotRotational,
  RepellingSlidingEncountered,
  SimultaneousEvents,
  NonFiniteState,
  CorrectionDiverged,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Base of every error thrown by the library. kind() is stable and is what the
// CLI prints on its diagnostic line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace bestab
