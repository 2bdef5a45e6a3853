#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lipfill {

enum class ErrorCode {
  DisconnectedGraph,
  NonPositiveWeight,
  InvalidInput,
  EmptySubset,
  EmptySet,
  NonPositiveEpsilon,
  CoverageFailure,
  DimensionCapExceeded,
  PointNotInComplex,
  DimensionZero,
  MismatchedShape,
  ZeroTauBar,
  ZDisconnectedBetweenImages,
  SnapInvalid,
  SupportViolation,
  ZPathMissing,
  NotACycle,
  SubgraphDisconnected,
  NoFilling,
  FrontierDisconnected,
  DegenerateSamples,
  OracleTooLarge,
  OracleFailed,
};

std::string_view to_string(ErrorCode code);

/// Every recoverable failure in the library is reported as an Error. The
/// code is stable; the message carries context for diagnostics.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// True for failures that mean the input violates a connectivity
  /// hypothesis rather than that the program or the input file is broken.
  bool is_hypothesis_failure() const noexcept {
    return code_ == ErrorCode::ZDisconnectedBetweenImages || code_ == ErrorCode::ZPathMissing ||
           code_ == ErrorCode::SubgraphDisconnected || code_ == ErrorCode::NoFilling ||
           code_ == ErrorCode::FrontierDisconnected;
  }

 private:
  ErrorCode code_;
};

}  // namespace lipfill
