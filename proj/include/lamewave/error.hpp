#pragma once

#include <stdexcept>
#include <string>

namespace lamewave {

enum class ErrorCode {
  InvalidMaterial,
  InvalidArgument,
  SonicDegenerate,
  SonicRegime,
  OnSingularity,
  UnsupportedOrder,
  OnCharacteristic,
  BadNormal,
  NotHyperbolic,
  MismatchedTraces,
  BadSpeed,
  QuadratureNonconvergent,
  TargetOnSurface,
  TargetOnAxis,
  AllPointsExcluded,
  TruncationNonconvergent,
  Config,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidMaterial: return "invalid-material";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::SonicDegenerate: return "sonic-degenerate";
    case ErrorCode::SonicRegime: return "sonic-regime";
    case ErrorCode::OnSingularity: return "on-singularity";
    case ErrorCode::UnsupportedOrder: return "unsupported-order";
    case ErrorCode::OnCharacteristic: return "on-characteristic";
    case ErrorCode::BadNormal: return "bad-normal";
    case ErrorCode::NotHyperbolic: return "not-hyperbolic";
    case ErrorCode::MismatchedTraces: return "mismatched-trace-points";
    case ErrorCode::BadSpeed: return "bad-speed";
    case ErrorCode::QuadratureNonconvergent: return "quadrature-nonconvergent";
    case ErrorCode::TargetOnSurface: return "target-on-surface";
    case ErrorCode::TargetOnAxis: return "target-on-axis";
    case ErrorCode::AllPointsExcluded: return "all-points-excluded";
    case ErrorCode::TruncationNonconvergent: return "truncation-nonconvergent";
    case ErrorCode::Config: return "config-error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lamewave
