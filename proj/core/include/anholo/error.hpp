#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace anholo {

enum class ErrorCode {
  InvalidArgument,
  NonHermitian,
  NonUnitary,
  NoConvergence,
  UnnormalizedVector,
  BadGrid,
  TrackingFailure,
  BadSpan,
  NonpositiveGap,
  NotConverged,
  DegenerateChoice,
  GapConditionViolated,
  DegenerateGround,
  IndexOutOfRange,
  CrossingNotFound,
  CrossingAtSingularPoint,
  TooLarge,
  ZeroProjection,
  PeriodTooLong,
  ConsistencyCheckFailed,
  ConfigError,
};

std::string_view to_string(ErrorCode code);

/// True for codes that signal bad input rather than a numerical failure.
bool is_precondition_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace anholo
