#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace conetime {

enum class ErrorCode {
  Io,
  Parse,
  MismatchedEdgeLength,
  UnpairedEdge,
  DuplicateGluing,
  DegenerateTriangle,
  NonManifoldVertex,
  InconsistentOrientation,
  GaussBonnetViolation,
  UnknownVertex,
  SearchBudgetExceeded,
  InvalidStart,
  NonpositiveRadius,
  AngleOutOfRange,
  ResidueSumNonzero,
  ResidueMismatch,
  InconsistentPeriods,
  PathThroughVertex,
  InadmissibleWinding,
  InexactAngle,
  DegenerateGeometry,
  DisconnectedLegs,
  NotClosed,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Process exit status for an error: 1 I/O, 2 invalid input, 4 search budget.
int exit_status(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace conetime
