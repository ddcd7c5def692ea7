#include "ghost/errors.hpp"

namespace ghost {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorCode::DegenerateCorrelation: return "DegenerateCorrelation";
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::SpanTooSmall: return "SpanTooSmall";
    case ErrorCode::AliasingRisk: return "AliasingRisk";
    case ErrorCode::UnderResolved: return "UnderResolved";
    case ErrorCode::GridTooLarge: return "GridTooLarge";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NoExtremaFound: return "NoExtremaFound";
    case ErrorCode::NoFringePair: return "NoFringePair";
    case ErrorCode::TooFewPeaks: return "TooFewPeaks";
    case ErrorCode::OutsideEnvelope: return "OutsideEnvelope";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

bool is_numerical_guard(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DegenerateCorrelation:
    case ErrorCode::DegenerateGeometry:
    case ErrorCode::SpanTooSmall:
    case ErrorCode::AliasingRisk:
    case ErrorCode::UnderResolved:
    case ErrorCode::GridTooLarge:
    case ErrorCode::TooFewSamples:
    case ErrorCode::NoExtremaFound:
    case ErrorCode::NoFringePair:
    case ErrorCode::TooFewPeaks:
    case ErrorCode::OutsideEnvelope:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace ghost
