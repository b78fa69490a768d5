#include "corrsync/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "corrsync/gauss_info.hpp"

namespace corrsync {

namespace {

constexpr double kRegimeTol = 1e-9;
constexpr double kStabilityGuard = 0.1;
constexpr double kPhysicalityTol = 1e-8;
constexpr double kCoincidentEigenvalues = 1e-6;

// exp(-i M t) on the a-sector, by eigendecomposition away from exceptional
// points and by Pade scaling-and-squaring near them.
class MomentPropagator {
 public:
  MomentPropagator(const SystemParams& p, double condition_threshold)
      : M_(build_dynamical_matrix(p).M) {
    Eigen::ComplexEigenSolver<Mat2c> es(M_);
    V_ = es.eigenvectors();
    lambda_ = es.eigenvalues();
    Eigen::JacobiSVD<Mat2c> svd(V_);
    const auto& sv = svd.singularValues();
    const double cond = sv(1) > 0.0 ? sv(0) / sv(1) : std::numeric_limits<double>::infinity();
    // At an exact EP the computed condition number only reaches ~1/sqrt(eps),
    // so near-coincident eigenvalues also select the fallback.
    const bool coincident = std::abs(lambda_(0) - lambda_(1)) <= kCoincidentEigenvalues * M_.norm();
    fallback_ = !(es.info() == Eigen::Success) || !std::isfinite(cond) || cond > condition_threshold || coincident;
    if (!fallback_) Vinv_ = V_.inverse();
  }

  bool uses_fallback() const { return fallback_; }

  Vec2c apply(const Vec2c& a0, double t) const {
    if (t == 0.0) return a0;
    if (fallback_) {
      const Mat2c gen = (-kI * t) * M_;
      return gen.exp() * a0;
    }
    Vec2c phases;
    for (int i = 0; i < 2; ++i) phases(i) = std::exp(-kI * lambda_(i) * t);
    return V_ * phases.asDiagonal() * (Vinv_ * a0);
  }

  MomentState apply(const MomentState& x0, double t) const {
    const Vec2c a = apply(Vec2c(x0.a1(), x0.a2()), t);
    if (!a.allFinite()) {
      throw Error(ErrorCode::NonFinite, "moment propagation overflowed");
    }
    return MomentState::displaced(a(0), a(1), x0.t + t);
  }

 private:
  Mat2c M_;
  Mat2c V_;
  Mat2c Vinv_;
  Vec2c lambda_;
  bool fallback_ = false;
};

void require_paired(const MomentState& x0) {
  if (!x0.x.allFinite()) {
    throw Error(ErrorCode::NonFinite, "initial moments are not finite");
  }
  const double scale = 1.0 + x0.x.cwiseAbs().maxCoeff();
  if (std::abs(x0.x(kA1dag) - std::conj(x0.x(kA1))) > 1e-12 * scale ||
      std::abs(x0.x(kA2dag) - std::conj(x0.x(kA2))) > 1e-12 * scale) {
    throw Error(ErrorCode::OutOfRange, "moments violate the conjugation pairing");
  }
}

}  // namespace

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Normal: return "normal";
    case Regime::ExceptionalPoint: return "exceptional_point";
    case Regime::Synchronized: return "synchronized";
  }
  return "unknown";
}

SpectralResult eigenspectrum(const SystemParams& p) {
  const double g12 = gamma12(p);
  const double delta = p.detuning();
  const cplx z = cplx(2.0 * p.g, -p.xi * g12);
  const cplx disc = z * z + delta * delta;
  // The discriminant carries cancellation error of order eps (|z|^2 + delta^2);
  // its square root would turn that into a spurious ~1e-8 gap at the EP.
  const double noise = 8.0 * std::numeric_limits<double>::epsilon() * (std::norm(z) + delta * delta);
  const cplx root = std::abs(disc) <= noise ? cplx(0.0) : std::sqrt(disc);
  const cplx center = 0.5 * cplx(p.omega1 + p.omega2, -p.gamma);

  SpectralResult r;
  r.lambda_plus = center + 0.5 * root;
  r.lambda_minus = center - 0.5 * root;
  // The principal root has Re >= 0, so only the tie needs reordering.
  if (std::abs(root.real()) <= 1e-14 && r.lambda_minus.imag() > r.lambda_plus.imag()) {
    std::swap(r.lambda_plus, r.lambda_minus);
  }
  r.gap_real = std::abs(root.real());
  r.gap_imag = std::abs(root.imag());
  if (r.gap_real < kRegimeTol && r.gap_imag > kRegimeTol) {
    r.regime = Regime::Synchronized;
  } else if (r.gap_real < kRegimeTol && r.gap_imag < kRegimeTol && p.gamma > 0.0) {
    r.regime = Regime::ExceptionalPoint;
  } else {
    r.regime = Regime::Normal;
  }
  return r;
}

MomentState propagate_moments(const SystemParams& p, const MomentState& x0, double t,
                              double ep_condition_threshold) {
  require_paired(x0);
  return MomentPropagator(p, ep_condition_threshold).apply(x0, t);
}

double IntegratorSettings::step_for(const SystemParams& p) const {
  if (dt > 0.0) return dt;
  return (2.0 * std::numbers::pi / p.omega1) / 200.0;
}

Trajectory propagate_covariance(const SystemParams& p, const CovarianceState& theta0,
                                double t_end, double dt, bool stop_on_unphysical) {
  return propagate_covariance(p, build_diffusion_matrix(p), theta0, t_end, dt, stop_on_unphysical);
}

Trajectory propagate_covariance(const SystemParams& p, const DiffusionMatrix& diffusion,
                                const CovarianceState& theta0, double t_end, double dt,
                                bool stop_on_unphysical) {
  if (!(dt > 0.0)) {
    throw Error(ErrorCode::OutOfRange, "dt must be positive");
  }
  if (!(t_end >= 0.0)) {
    throw Error(ErrorCode::OutOfRange, "t_end must be non-negative");
  }
  const SpectralResult spec = eigenspectrum(p);
  // Re eig W = Im lambda for both sectors.
  const double max_rate = std::max(std::abs(spec.lambda_plus.imag()), std::abs(spec.lambda_minus.imag()));
  if (dt * max_rate > kStabilityGuard) {
    throw Error(ErrorCode::StepTooLarge, "dt * max|Re eig W| = " + std::to_string(dt * max_rate) +
                                             " exceeds " + std::to_string(kStabilityGuard));
  }

  const Mat4c W = build_dynamical_matrix(p).W;
  const Mat4c Wh = W.adjoint();
  const Mat4c D = diffusion.D.cast<cplx>();
  auto rhs = [&](const Mat4c& th) -> Mat4c { return W * th + th * Wh + D; };

  const auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  Trajectory traj;
  traj.params = p;
  traj.settings.dt = dt;
  traj.settings.t_end = t_end;
  traj.settings.stop_on_unphysical = stop_on_unphysical;
  traj.covariances.reserve(static_cast<std::size_t>(std::max(0L, steps)) + 1);
  traj.physicality.reserve(traj.covariances.capacity());

  CovarianceState cur = theta0;
  cur.hermitize();
  for (long k = 0;; ++k) {
    cur.t = theta0.t + static_cast<double>(k) * dt;
    const PhysicalityResult phys = physicality_check(ladder_to_quadrature(cur));
    if (stop_on_unphysical && phys.min_eigenvalue < -kPhysicalityTol) {
      throw Error(ErrorCode::PhysicalityLost,
                  "sample " + std::to_string(k) + " at t=" + std::to_string(cur.t) +
                      " has min eigenvalue " + std::to_string(phys.min_eigenvalue));
    }
    traj.covariances.push_back(cur);
    traj.physicality.push_back(phys.min_eigenvalue);
    if (k >= steps) break;

    const Mat4c& th = cur.theta;
    const Mat4c k1 = rhs(th);
    const Mat4c k2 = rhs(th + 0.5 * dt * k1);
    const Mat4c k3 = rhs(th + 0.5 * dt * k2);
    const Mat4c k4 = rhs(th + dt * k3);
    cur.theta = th + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    cur.hermitize();
  }
  return traj;
}

Trajectory simulate(const SystemParams& p, const MomentState& x0, const CovarianceState& theta0,
                    const IntegratorSettings& settings) {
  return simulate(p, build_diffusion_matrix(p), x0, theta0, settings);
}

Trajectory simulate(const SystemParams& p, const DiffusionMatrix& diffusion, const MomentState& x0,
                    const CovarianceState& theta0, const IntegratorSettings& settings) {
  require_paired(x0);
  const double dt = settings.step_for(p);
  Trajectory traj = propagate_covariance(p, diffusion, theta0, settings.t_end, dt, settings.stop_on_unphysical);
  traj.settings = settings;
  traj.settings.dt = dt;

  const MomentPropagator prop(p, settings.ep_condition_threshold);
  traj.used_exponential_fallback = prop.uses_fallback();
  traj.moments.reserve(traj.covariances.size());
  for (const auto& c : traj.covariances) {
    MomentState m = prop.apply(x0, c.t - theta0.t);
    m.t = c.t;
    traj.moments.push_back(m);
  }
  return traj;
}

SyncDiagnostics sync_diagnostics(const Trajectory& traj) {
  SyncDiagnostics d;
  const std::size_t n = traj.moments.size();
  d.t.reserve(n);
  d.relative_phase.reserve(n);
  d.amplitude_ratio.reserve(n);

  double prev = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const MomentState& m = traj.moments[k];
    const double r1 = std::abs(m.a1());
    const double r2 = std::abs(m.a2());
    if (r1 < 1e-12 || r2 < 1e-12) {
      throw Error(ErrorCode::AmplitudeUnderflow,
                  "moment amplitude below 1e-12 at t=" + std::to_string(m.t));
    }
    double phase = std::arg(m.a1() * std::conj(m.a2()));  // (-pi, pi]
    if (k > 0) {
      phase += 2.0 * std::numbers::pi * std::round((prev - phase) / (2.0 * std::numbers::pi));
    }
    prev = phase;
    d.t.push_back(m.t);
    d.relative_phase.push_back(phase);
    d.amplitude_ratio.push_back(r1 / r2);
  }

  // Least-squares slope of ln|<a1>| over the second half, centered in t.
  const std::size_t start = n / 2;
  if (n - start >= 2) {
    const auto count = static_cast<double>(n - start);
    double t_mean = 0.0, y_mean = 0.0;
    for (std::size_t k = start; k < n; ++k) {
      t_mean += d.t[k] / count;
      y_mean += std::log(std::abs(traj.moments[k].a1())) / count;
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = start; k < n; ++k) {
      const double dt = d.t[k] - t_mean;
      sxx += dt * dt;
      sxy += dt * (std::log(std::abs(traj.moments[k].a1())) - y_mean);
    }
    d.decay_rate_fit = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  return d;
}

}  // namespace corrsync
