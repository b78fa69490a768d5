#pragma once

#include <array>
#include <optional>
#include <vector>

#include "corrsync/types.hpp"

namespace corrsync {

/// Physical inputs of the two-oscillator model in units where omega1 = 1
/// sets the time scale.
struct SystemParams {
  double omega1 = 1.0;
  double omega2 = 1.0;
  double g = 0.0;      ///< exchange coupling
  double gamma = 0.0;  ///< bath relaxation rate
  double xi = 0.0;     ///< noise correlation in [-1, 1]
  double nbar1 = 0.0;  ///< thermal occupation of bath 1
  double nbar2 = 0.0;  ///< thermal occupation of bath 2

  double detuning() const noexcept { return omega1 - omega2; }
};

enum class ParamWarning {
  DeltaSingularity,  ///< |xi * gamma12| within 1e-9 of gamma
};

enum class ParamNote {
  SynchronizedRegime,  ///< xi * gamma12 >= |delta|
};

struct ValidatedParams {
  SystemParams params;
  std::vector<ParamWarning> warnings;
  std::vector<ParamNote> notes;

  bool has_warning(ParamWarning w) const;
  bool has_note(ParamNote n) const;
};

/// Throws Error{OutOfRange | NonFinite} on invalid input. Never rejects a
/// point at the steady-state singularity; it is flagged instead.
ValidatedParams validate_params(const SystemParams& p);

/// Cross-relaxation rate induced by the shared bath.
double gamma12(const SystemParams& p);

struct DynamicalMatrix {
  Mat4c W;  ///< drift of the ladder moments, ordered (a1, a1^dag, a2, a2^dag)
  Mat2c M;  ///< reduced matrix with d/dt (<a1>, <a2>) = -i M (<a1>, <a2>)
};

DynamicalMatrix build_dynamical_matrix(const SystemParams& p);

struct DiffusionMatrix {
  Mat4 D;  ///< positive convention: dTheta/dt = W Theta + Theta W^dag + D
};

DiffusionMatrix build_diffusion_matrix(const SystemParams& p);

/// Symmetrized diffusion generated by the correlated thermal channels. It
/// differs from build_diffusion_matrix by xi gamma12 / 2 in the inter-mode
/// entries and always yields physical states.
DiffusionMatrix build_lindblad_diffusion(const SystemParams& p);

enum class DiffusionModel { Printed, Lindblad };

std::string_view to_string(DiffusionModel m);

DiffusionMatrix diffusion_for(const SystemParams& p, DiffusionModel model);

/// Drift and diffusion obtained by summing the adjoint dissipator over the
/// correlated channels. Used to cross-check the direct builders.
struct AssembledGenerator {
  Mat4c W;
  Mat4c diffusion_symmetrized;    ///< for Theta_ij = 1/2 <{dx_i, dx_j^dag}>
  Mat4c diffusion_normal_ordered; ///< for <a_j^dag a_i> (a-sector) and its conjugate
};

struct LindbladCoefficients {
  std::array<double, 2> lowering;  ///< sqrt(gamma (nbar_i + 1))
  std::array<double, 2> raising;   ///< sqrt(gamma nbar_i)
  double symmetric_weight;         ///< sqrt((1 + xi) / 2)
  double antisymmetric_weight;     ///< sqrt((1 - xi) / 2)

  /// Mode-space coefficient vectors of every channel L = sum_j c_j b_j,
  /// where b_j is a_j for lowering and a_j^dag for raising channels.
  struct Channel {
    bool raising;
    Vec2c coeffs;
  };
  std::array<Channel, 4> channels() const;

  AssembledGenerator assemble(const SystemParams& p) const;
};

LindbladCoefficients build_lindblad_ops(const SystemParams& p);

/// Correlation at which the normal-mode frequencies coalesce. Returns
/// nullopt when the threshold lies outside [0, 1]. Throws ZeroDamping when
/// gamma12 == 0.
std::optional<double> critical_xi(const SystemParams& p);

}  // namespace corrsync
