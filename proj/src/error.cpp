#include "geodual/error.hpp"

namespace geodual {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidPoint: return "InvalidPoint";
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::NotHyperbolic: return "NotHyperbolic";
    case ErrorCode::DegenerateSegment: return "DegenerateSegment";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::RelatorViolation: return "RelatorViolation";
    case ErrorCode::NonHyperbolicGenerator: return "NonHyperbolicGenerator";
    case ErrorCode::BallTooLarge: return "BallTooLarge";
    case ErrorCode::NonCompactBox: return "NonCompactBox";
    case ErrorCode::NotConvexPosition: return "NotConvexPosition";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace geodual
