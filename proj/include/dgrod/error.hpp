#pragma once

#include <stdexcept>
#include <string>

namespace dgrod {

enum class ErrorCode {
  InvalidArgument,
  UnknownCurve,
  NoIntersection,
  UnsupportedVersion,
  MalformedSection,
  NonTriangleElement,
  NonConformingMesh,
  RankDeficientConstraints,
  IllConditionedConstraintBlock,
  TraceMismatch,
  IndexOutOfRange,
  SingularMatrix,
  DidNotConverge,
  NonConvergence,
  MissingDerivatives,
  DegenerateLevels,
  ConfigError,
};

const char* to_string(ErrorCode code);

/// Single exception type for the library; the code identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dgrod
