#pragma once

#include <vector>

#include "corrsync/model.hpp"
#include "corrsync/state.hpp"

namespace corrsync {

enum class Regime { Normal, ExceptionalPoint, Synchronized };

std::string_view to_string(Regime r);

struct SpectralResult {
  cplx lambda_plus;   ///< larger real part (ties: larger imaginary part)
  cplx lambda_minus;
  double gap_real = 0.0;  ///< |Re lambda+ - Re lambda-|
  double gap_imag = 0.0;  ///< |Im lambda+ - Im lambda-|
  Regime regime = Regime::Normal;
};

/// Closed-form eigenvalues of the reduced moment matrix M.
SpectralResult eigenspectrum(const SystemParams& p);

/// Eigenvector condition number above which propagate_moments switches from
/// the eigendecomposition to a scaling-and-squaring exponential.
inline constexpr double kExceptionalPointCondition = 1e8;

/// x(t) = exp(W t) x0 with no source term.
MomentState propagate_moments(const SystemParams& p, const MomentState& x0, double t,
                              double ep_condition_threshold = kExceptionalPointCondition);

struct IntegratorSettings {
  double dt = 0.0;     ///< 0 selects (2 pi / omega1) / 200
  double t_end = 0.0;
  double ep_condition_threshold = kExceptionalPointCondition;
  bool stop_on_unphysical = true;  ///< false records violations instead of throwing

  double step_for(const SystemParams& p) const;
};

struct Trajectory {
  SystemParams params;
  IntegratorSettings settings;
  std::vector<MomentState> moments;          ///< empty for covariance-only runs
  std::vector<CovarianceState> covariances;
  std::vector<double> physicality;  ///< min eigenvalue of sigma + (i/2) Omega per sample
  bool used_exponential_fallback = false;
};

/// Fixed-step RK4 on d(theta)/dt = W theta + theta W^dag + D. Samples are
/// emitted every step, re-Hermitized and checked for physicality.
/// Throws StepTooLarge, and PhysicalityLost unless `stop_on_unphysical`
/// is false.
Trajectory propagate_covariance(const SystemParams& p, const CovarianceState& theta0,
                                double t_end, double dt, bool stop_on_unphysical = true);

/// Same as propagate_covariance with a caller-supplied diffusion matrix.
Trajectory propagate_covariance(const SystemParams& p, const DiffusionMatrix& diffusion,
                                const CovarianceState& theta0, double t_end, double dt,
                                bool stop_on_unphysical = true);

/// Covariance integration plus exact moments at every sample time.
Trajectory simulate(const SystemParams& p, const MomentState& x0, const CovarianceState& theta0,
                    const IntegratorSettings& settings);
Trajectory simulate(const SystemParams& p, const DiffusionMatrix& diffusion, const MomentState& x0,
                    const CovarianceState& theta0, const IntegratorSettings& settings);

struct SyncDiagnostics {
  std::vector<double> t;
  std::vector<double> relative_phase;   ///< unwrapped arg<a1> - arg<a2>
  std::vector<double> amplitude_ratio;  ///< |<a1>| / |<a2>|
  double decay_rate_fit = 0.0;          ///< slope of ln|<a1>| over the last half
};

/// Throws AmplitudeUnderflow when any |<a_i>| < 1e-12.
SyncDiagnostics sync_diagnostics(const Trajectory& traj);

}  // namespace corrsync
