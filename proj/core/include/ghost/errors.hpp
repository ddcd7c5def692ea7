#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ghost {

enum class ErrorCode {
  InvalidParameter,
  NonHermitian,
  NotNormalized,
  NotPositiveSemidefinite,
  DegenerateCorrelation,
  DegenerateGeometry,
  SpanTooSmall,
  AliasingRisk,
  UnderResolved,
  GridTooLarge,
  TooFewSamples,
  NoExtremaFound,
  NoFringePair,
  TooFewPeaks,
  OutsideEnvelope,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for the guards that reject a numerically unsafe request
/// (as opposed to a malformed one).
bool is_numerical_guard(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ghost
