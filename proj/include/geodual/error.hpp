#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geodual {

enum class ErrorCode {
  InvalidArgument,
  InvalidPoint,
  InvalidMatrix,
  NotHyperbolic,
  DegenerateSegment,
  CoincidentPoints,
  RelatorViolation,
  NonHyperbolicGenerator,
  BallTooLarge,
  NonCompactBox,
  NotConvexPosition,
  Disconnected,
  Unsupported,
  FileNotFound,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code; the
// CLI maps codes to exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace geodual
