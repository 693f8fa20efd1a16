#include "dgrod/error.hpp"

namespace dgrod {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownCurve: return "UnknownCurve";
    case ErrorCode::NoIntersection: return "NoIntersection";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::MalformedSection: return "MalformedSection";
    case ErrorCode::NonTriangleElement: return "NonTriangleElement";
    case ErrorCode::NonConformingMesh: return "NonConformingMesh";
    case ErrorCode::RankDeficientConstraints: return "RankDeficientConstraints";
    case ErrorCode::IllConditionedConstraintBlock: return "IllConditionedConstraintBlock";
    case ErrorCode::TraceMismatch: return "TraceMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::DidNotConverge: return "DidNotConverge";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::MissingDerivatives: return "MissingDerivatives";
    case ErrorCode::DegenerateLevels: return "DegenerateLevels";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace dgrod
