#include "corrsync/model.hpp"

#include "corrsync/optim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace corrsync {

namespace {

constexpr double kSingularityTol = 1e-9;

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw Error(ErrorCode::NonFinite, std::string(name) + " is not finite");
  }
}

// Lifts a 2x2 a-sector block into the 4x4 ladder ordering; the a^dag sector
// receives the complex conjugate.
Mat4c lift(const Mat2c& a_sector) {
  constexpr int idx[2] = {kA1, kA2};
  constexpr int idx_dag[2] = {kA1dag, kA2dag};
  Mat4c out = Mat4c::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out(idx[i], idx[j]) = a_sector(i, j);
      out(idx_dag[i], idx_dag[j]) = std::conj(a_sector(i, j));
    }
  }
  return out;
}

}  // namespace

bool ValidatedParams::has_warning(ParamWarning w) const {
  return std::find(warnings.begin(), warnings.end(), w) != warnings.end();
}

bool ValidatedParams::has_note(ParamNote n) const {
  return std::find(notes.begin(), notes.end(), n) != notes.end();
}

ValidatedParams validate_params(const SystemParams& p) {
  require_finite(p.omega1, "omega1");
  require_finite(p.omega2, "omega2");
  require_finite(p.g, "g");
  require_finite(p.gamma, "gamma");
  require_finite(p.xi, "xi");
  require_finite(p.nbar1, "nbar1");
  require_finite(p.nbar2, "nbar2");
  if (p.xi < -1.0 || p.xi > 1.0) {
    throw Error(ErrorCode::OutOfRange, "xi must lie in [-1, 1], got " + std::to_string(p.xi));
  }
  if (p.gamma < 0.0) {
    throw Error(ErrorCode::OutOfRange, "gamma must be non-negative");
  }
  if (p.nbar1 < 0.0 || p.nbar2 < 0.0) {
    throw Error(ErrorCode::OutOfRange, "thermal occupations must be non-negative");
  }

  ValidatedParams out{p, {}, {}};
  const double g12 = gamma12(p);
  if (std::abs(std::abs(p.xi * g12) - p.gamma) <= kSingularityTol) {
    out.warnings.push_back(ParamWarning::DeltaSingularity);
  }
  if (p.xi * g12 >= std::abs(p.detuning())) {
    out.notes.push_back(ParamNote::SynchronizedRegime);
  }
  return out;
}

double gamma12(const SystemParams& p) {
  return p.gamma * (std::sqrt((p.nbar1 + 1.0) * (p.nbar2 + 1.0)) - std::sqrt(p.nbar1 * p.nbar2));
}

DynamicalMatrix build_dynamical_matrix(const SystemParams& p) {
  const double g12 = gamma12(p);
  Mat2c M;
  M(0, 0) = cplx(p.omega1, -p.gamma / 2.0);
  M(1, 1) = cplx(p.omega2, -p.gamma / 2.0);
  M(0, 1) = M(1, 0) = cplx(p.g, -p.xi * g12 / 2.0);
  return {lift(-kI * M), M};
}

DiffusionMatrix build_diffusion_matrix(const SystemParams& p) {
  const double d1 = p.gamma / 2.0 + p.gamma * p.nbar1;
  const double d2 = p.gamma / 2.0 + p.gamma * p.nbar2;
  const double cross = p.xi * p.gamma * std::sqrt(p.nbar1 * p.nbar2);
  Mat4 D = Mat4::Zero();
  D(kA1, kA1) = D(kA1dag, kA1dag) = d1;
  D(kA2, kA2) = D(kA2dag, kA2dag) = d2;
  D(kA1, kA2) = D(kA2, kA1) = cross;
  D(kA1dag, kA2dag) = D(kA2dag, kA1dag) = cross;
  return {D};
}

DiffusionMatrix build_lindblad_diffusion(const SystemParams& p) {
  DiffusionMatrix d = build_diffusion_matrix(p);
  const double extra = 0.5 * p.xi * gamma12(p);
  d.D(kA1, kA2) += extra;
  d.D(kA2, kA1) += extra;
  d.D(kA1dag, kA2dag) += extra;
  d.D(kA2dag, kA1dag) += extra;
  return d;
}

DiffusionMatrix diffusion_for(const SystemParams& p, DiffusionModel model) {
  return model == DiffusionModel::Lindblad ? build_lindblad_diffusion(p) : build_diffusion_matrix(p);
}

std::string_view to_string(DiffusionModel m) {
  return m == DiffusionModel::Lindblad ? "lindblad" : "printed";
}

LindbladCoefficients build_lindblad_ops(const SystemParams& p) {
  LindbladCoefficients c{};
  c.lowering = {std::sqrt(p.gamma * (p.nbar1 + 1.0)), std::sqrt(p.gamma * (p.nbar2 + 1.0))};
  c.raising = {std::sqrt(p.gamma * p.nbar1), std::sqrt(p.gamma * p.nbar2)};
  // max() guards against -0.0 and round-off at xi = +-1.
  c.symmetric_weight = std::sqrt(std::max(0.0, (1.0 + p.xi) / 2.0));
  c.antisymmetric_weight = std::sqrt(std::max(0.0, (1.0 - p.xi) / 2.0));
  return c;
}

std::array<LindbladCoefficients::Channel, 4> LindbladCoefficients::channels() const {
  const double wp = symmetric_weight;
  const double wm = antisymmetric_weight;
  return {{
      {false, Vec2c(wp * lowering[0], wp * lowering[1])},
      {false, Vec2c(wm * lowering[0], -wm * lowering[1])},
      {true, Vec2c(wp * raising[0], wp * raising[1])},
      {true, Vec2c(wm * raising[0], -wm * raising[1])},
  }};
}

AssembledGenerator LindbladCoefficients::assemble(const SystemParams& p) const {
  // Hamiltonian drift: d a_m/dt = -i sum_j h_mj a_j.
  Mat2c h;
  h << p.omega1, p.g, p.g, p.omega2;
  Mat2c drift = -kI * h;

  // Adjoint dissipator on linear channels. A lowering channel L = l.a
  // contributes -1/2 conj(l) l^T to the a-sector drift and nothing to the
  // normal-ordered noise; a raising channel L = r.a^dag contributes
  // +1/2 r r^dag to the drift and conj(r) r^T to d<a_i^dag a_j>/dt.
  Mat2c noise_normal = Mat2c::Zero();  // for N_ij = <a_i^dag a_j>
  for (const auto& ch : channels()) {
    if (ch.raising) {
      drift += 0.5 * ch.coeffs * ch.coeffs.adjoint();
      noise_normal += ch.coeffs.conjugate() * ch.coeffs.transpose();
    } else {
      drift += -0.5 * ch.coeffs.conjugate() * ch.coeffs.transpose();
    }
  }

  // Theta (a-sector) = N^T + I/2, so its noise is N-noise^T - (A + A^dag)/2.
  const Mat2c noise_normal_t = noise_normal.transpose();
  const Mat2c noise_sym = noise_normal_t - 0.5 * (drift + drift.adjoint());

  return {lift(drift), lift(noise_sym), lift(noise_normal_t)};
}

std::optional<double> critical_xi(const SystemParams& p) {
  const double g12 = gamma12(p);
  if (g12 == 0.0) {
    throw Error(ErrorCode::ZeroDamping, "gamma12 vanishes; no synchronization threshold");
  }
  const double delta = std::abs(p.detuning());
  if (p.g == 0.0) {
    const double xc = delta / g12;
    if (xc > 1.0) return std::nullopt;
    return xc;
  }

  // |lambda+ - lambda-|^2 = |disc|^2 with disc = (2g - i xi g12)^2 + delta^2.
  // The sign of d|disc|^2/dxi, divided by the positive factor 2 xi g12,
  // changes once on (0, inf); bisect on it.
  auto slope_sign = [&](double xi) {
    const cplx z = cplx(2.0 * p.g, -xi * g12);
    const cplx disc = z * z + delta * delta;
    return (std::conj(disc) * (-kI * z)).real() / xi;
  };
  constexpr double lo = 1e-12;
  constexpr double hi = 1.0;
  if (slope_sign(lo) >= 0.0) return 0.0;
  if (slope_sign(hi) < 0.0) return std::nullopt;
  return optim::bisect(slope_sign, lo, hi, 1e-10);
}

}  // namespace corrsync
