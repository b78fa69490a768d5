#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace corrsync {

using cplx = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Vec4c = Eigen::Vector4cd;
using Vec2c = Eigen::Vector2cd;

inline constexpr cplx kI{0.0, 1.0};

// Ladder ordering used by every 4x4 object: (a1, a1^dag, a2, a2^dag).
inline constexpr int kA1 = 0;
inline constexpr int kA1dag = 1;
inline constexpr int kA2 = 2;
inline constexpr int kA2dag = 3;

enum class ErrorCode {
  OutOfRange,
  NonFinite,
  ZeroDamping,
  StepTooLarge,
  PhysicalityLost,
  AmplitudeUnderflow,
  NoUniqueSteadyState,
  SingularSolve,
  Unstable,
  DetuningNotZero,
  DeltaSingular,
  NotHermitian,
  NotPositiveDefinite,
  OptimizationDidNotConverge,
  Config,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        message_(what) {}

  ErrorCode code() const noexcept { return code_; }
  /// The detail without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ZeroDamping: return "ZeroDamping";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::PhysicalityLost: return "PhysicalityLost";
    case ErrorCode::AmplitudeUnderflow: return "AmplitudeUnderflow";
    case ErrorCode::NoUniqueSteadyState: return "NoUniqueSteadyState";
    case ErrorCode::SingularSolve: return "SingularSolve";
    case ErrorCode::Unstable: return "Unstable";
    case ErrorCode::DetuningNotZero: return "DetuningNotZero";
    case ErrorCode::DeltaSingular: return "DeltaSingular";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::OptimizationDidNotConverge: return "OptimizationDidNotConverge";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace corrsync
