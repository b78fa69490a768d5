#include "corrsync/steady.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "corrsync/dynamics.hpp"
#include "corrsync/optim.hpp"

namespace corrsync {

namespace {

using Mat16c = Eigen::Matrix<cplx, 16, 16>;
using Vec16c = Eigen::Matrix<cplx, 16, 1>;

// Full ladder covariance from the mode block N = <a_i^dag a_j> + delta/2.
CovarianceState from_mode_block(const Mat2c& N) {
  CovarianceState s{0.0, Mat4c::Zero()};
  constexpr int idx[2] = {kA1, kA2};
  constexpr int idx_dag[2] = {kA1dag, kA2dag};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      s.theta(idx[i], idx[j]) = N(j, i);
      s.theta(idx_dag[i], idx_dag[j]) = N(i, j);
    }
  }
  return s;
}

double residual_of(const SystemParams& p, const Mat4& D, const Mat4c& theta) {
  const Mat4c W = build_dynamical_matrix(p).W;
  return (W * theta + theta * W.adjoint() + D.cast<cplx>()).norm();
}

SteadyState closed_form_impl(const SystemParams& p, bool printed) {
  if (p.omega1 != p.omega2) {
    throw Error(ErrorCode::DetuningNotZero, "closed form requires omega1 == omega2");
  }
  const double g12 = gamma12(p);
  const double denom = p.gamma * p.gamma - g12 * g12 * p.xi * p.xi;
  if (std::abs(denom) < 1e-12) {
    throw Error(ErrorCode::DeltaSingular, "gamma^2 - gamma12^2 xi^2 vanishes");
  }
  const double r = std::sqrt(p.nbar1 * p.nbar2);
  const double sign = printed ? 1.0 : -1.0;
  const double delta = (g12 * (p.nbar1 + p.nbar2 + 1.0) + sign * 2.0 * p.gamma * r) / (2.0 * denom);

  const double bias = p.nbar2 - p.nbar1;
  const double lorentz = 4.0 * p.g * p.g + p.gamma * p.gamma;
  const double exchange = lorentz > 0.0 ? 2.0 * p.g * p.g / lorentz * bias : 0.0;
  const double current = lorentz > 0.0 ? p.g * p.gamma / lorentz * bias : 0.0;

  Mat2c N;
  N(0, 0) = p.nbar1 + 0.5 + exchange + p.xi * p.xi * g12 * delta;
  N(1, 1) = p.nbar2 + 0.5 - exchange + p.xi * p.xi * g12 * delta;
  N(0, 1) = cplx(sign * p.gamma * p.xi * delta, current);
  N(1, 0) = std::conj(N(0, 1));

  SteadyState ss;
  ss.theta = from_mode_block(N);
  ss.method = printed ? SteadyMethod::PrintedClosedForm : SteadyMethod::ClosedForm;
  ss.residual = residual_of(p, build_diffusion_matrix(p).D, ss.theta.theta);
  return ss;
}

}  // namespace

std::string_view to_string(SteadyMethod m) {
  switch (m) {
    case SteadyMethod::NumericSolve: return "numeric";
    case SteadyMethod::ClosedForm: return "closed_form";
    case SteadyMethod::PrintedClosedForm: return "printed_closed_form";
  }
  return "unknown";
}

SteadyState solve_lyapunov(const SystemParams& p) {
  return solve_lyapunov(p, build_diffusion_matrix(p));
}

SteadyState solve_lyapunov(const SystemParams& p, const DiffusionMatrix& diffusion) {
  const SpectralResult spec = eigenspectrum(p);
  // Re eig W = Im lambda (each value appears once per sector).
  const double rate_plus = spec.lambda_plus.imag();
  const double rate_minus = spec.lambda_minus.imag();
  if (std::min(std::abs(rate_plus), std::abs(rate_minus)) < kUndampedRateTol) {
    throw Error(ErrorCode::NoUniqueSteadyState, "a normal mode is undamped (min |Re eig W| < 1e-6)");
  }
  if (std::max(rate_plus, rate_minus) > 0.0) {
    throw Error(ErrorCode::Unstable, "W has an eigenvalue with positive real part");
  }

  const Mat4c W = build_dynamical_matrix(p).W;
  const Mat4c Wc = W.conjugate();
  Mat16c K = Mat16c::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      // Row-major vec: (W kron I + I kron conj(W)).
      K.block<4, 4>(4 * i, 4 * j).diagonal().setConstant(W(i, j));
      if (i == j) K.block<4, 4>(4 * i, 4 * j) += Wc;
    }
  }
  Vec16c rhs;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) rhs(4 * i + j) = -diffusion.D(i, j);
  }

  Eigen::FullPivLU<Mat16c> lu(K);
  if (!lu.isInvertible() || lu.rcond() < 1e-14) {
    throw Error(ErrorCode::SingularSolve, "vectorized Lyapunov system is rank deficient");
  }
  const Vec16c sol = lu.solve(rhs);

  SteadyState ss;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) ss.theta.theta(i, j) = sol(4 * i + j);
  }
  ss.theta.hermitize();
  ss.theta.t = std::numeric_limits<double>::infinity();
  ss.residual = residual_of(p, diffusion.D, ss.theta.theta);
  ss.method = SteadyMethod::NumericSolve;
  return ss;
}

double closed_form_delta(const SystemParams& p) {
  const double g12 = gamma12(p);
  return (g12 * (p.nbar1 + p.nbar2 + 1.0) - 2.0 * p.gamma * std::sqrt(p.nbar1 * p.nbar2)) /
         (2.0 * (p.gamma * p.gamma - g12 * g12 * p.xi * p.xi));
}

SteadyState closed_form_steady(const SystemParams& p) { return closed_form_impl(p, false); }

SteadyState printed_closed_form(const SystemParams& p) { return closed_form_impl(p, true); }

SingularXi singular_xi(const SystemParams& p) {
  const double g12 = gamma12(p);
  return {std::sqrt(1.0 / (p.nbar1 + p.nbar2 + 1.0)),
          g12 > 0.0 ? p.gamma / g12 : std::numeric_limits<double>::infinity()};
}

double divergence_xi(const SystemParams& p) {
  auto solves = [&](double xi) {
    SystemParams q = p;
    q.xi = xi;
    try {
      (void)solve_lyapunov(q);
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  if (!solves(0.0)) return 0.0;
  if (solves(1.0)) return std::numeric_limits<double>::infinity();
  // Negative on the solvable side, positive where it fails.
  return optim::bisect([&](double xi) { return solves(xi) ? -1.0 : 1.0; }, 0.0, 1.0, 1e-9);
}

FluxReport flux(const SystemParams& p, const SteadyState& ss) {
  const Mat2c N = ss.theta.mode_block();
  const double bias = p.nbar2 - p.nbar1;
  const double lorentz = 4.0 * p.g * p.g + p.gamma * p.gamma;

  FluxReport f;
  f.J = lorentz > 0.0 ? 2.0 * p.g * p.gamma / lorentz * bias : 0.0;
  f.J_from_theta = (-kI * (N(0, 1) - N(1, 0))).real();
  const double n1 = N(0, 0).real() - 0.5;
  const double exchange_loss = p.xi * gamma12(p) * N(0, 1).real();
  const cplx balance = p.gamma * (p.nbar1 - n1) - kI * p.g * (N(0, 1) - N(1, 0)) - exchange_loss;
  f.continuity_residual = std::abs(balance);
  f.correlated_loss_gap = std::abs(exchange_loss);
  f.direction = (bias > 0.0) - (bias < 0.0);
  return f;
}

}  // namespace corrsync
