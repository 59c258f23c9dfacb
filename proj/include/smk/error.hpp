#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smk {

enum class ErrorCode {
  InvalidCover,
  InvalidInput,
  IndexOutOfPattern,
  DuplicateKey,
  MissingEntry,
  OrderTooHigh,
  OrderTooLow,
  ZeroVector,
  FlatnessViolated,
  NonPhysicalWeights,
  ReconstructionFailed,
  MarginalMismatch,
  FinalMarginalCheckFailed,
  Infeasible,
  DegreeTooLow,
  DimensionMismatch,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to a report without parsing
/// message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace smk
