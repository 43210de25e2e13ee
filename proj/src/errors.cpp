#include "conetime/errors.hpp"

namespace conetime {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::MismatchedEdgeLength: return "MismatchedEdgeLength";
    case ErrorCode::UnpairedEdge: return "UnpairedEdge";
    case ErrorCode::DuplicateGluing: return "DuplicateGluing";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::NonManifoldVertex: return "NonManifoldVertex";
    case ErrorCode::InconsistentOrientation: return "InconsistentOrientation";
    case ErrorCode::GaussBonnetViolation: return "GaussBonnetViolation";
    case ErrorCode::UnknownVertex: return "UnknownVertex";
    case ErrorCode::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorCode::InvalidStart: return "InvalidStart";
    case ErrorCode::NonpositiveRadius: return "NonpositiveRadius";
    case ErrorCode::AngleOutOfRange: return "AngleOutOfRange";
    case ErrorCode::ResidueSumNonzero: return "ResidueSumNonzero";
    case ErrorCode::ResidueMismatch: return "ResidueMismatch";
    case ErrorCode::InconsistentPeriods: return "InconsistentPeriods";
    case ErrorCode::PathThroughVertex: return "PathThroughVertex";
    case ErrorCode::InadmissibleWinding: return "InadmissibleWinding";
    case ErrorCode::InexactAngle: return "InexactAngle";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::DisconnectedLegs: return "DisconnectedLegs";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::Io: return 1;
    case ErrorCode::SearchBudgetExceeded: return 4;
    default: return 2;
  }
}

}  // namespace conetime
