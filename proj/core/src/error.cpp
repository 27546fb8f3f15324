#include "anholo/error.hpp"

namespace anholo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NonUnitary: return "NonUnitary";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::UnnormalizedVector: return "UnnormalizedVector";
    case ErrorCode::BadGrid: return "BadGrid";
    case ErrorCode::TrackingFailure: return "TrackingFailure";
    case ErrorCode::BadSpan: return "BadSpan";
    case ErrorCode::NonpositiveGap: return "NonpositiveGap";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::DegenerateChoice: return "DegenerateChoice";
    case ErrorCode::GapConditionViolated: return "GapConditionViolated";
    case ErrorCode::DegenerateGround: return "DegenerateGround";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::CrossingNotFound: return "CrossingNotFound";
    case ErrorCode::CrossingAtSingularPoint: return "CrossingAtSingularPoint";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ZeroProjection: return "ZeroProjection";
    case ErrorCode::PeriodTooLong: return "PeriodTooLong";
    case ErrorCode::ConsistencyCheckFailed: return "ConsistencyCheckFailed";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

bool is_precondition_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoConvergence:
    case ErrorCode::TrackingFailure:
    case ErrorCode::NotConverged:
    case ErrorCode::CrossingNotFound:
    case ErrorCode::ZeroProjection:
    case ErrorCode::ConsistencyCheckFailed:
      return false;
    default:
      return true;
  }
}

}  // namespace anholo
