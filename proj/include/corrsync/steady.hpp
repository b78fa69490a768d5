#pragma once

#include "corrsync/model.hpp"
#include "corrsync/state.hpp"

namespace corrsync {

enum class SteadyMethod { NumericSolve, ClosedForm, PrintedClosedForm };

std::string_view to_string(SteadyMethod m);

struct SteadyState {
  CovarianceState theta;
  double residual = 0.0;  ///< ||W theta + theta W^dag + D||_F
  SteadyMethod method = SteadyMethod::NumericSolve;
};

/// Distance in decay rate below which the undamped regime is declared.
inline constexpr double kUndampedRateTol = 1e-6;

/// Dense solve of the vectorized stationary equation W X + X W^dag = -D.
/// Throws NoUniqueSteadyState (a mode within kUndampedRateTol of undamped),
/// Unstable (a growing mode) or SingularSolve.
SteadyState solve_lyapunov(const SystemParams& p);
SteadyState solve_lyapunov(const SystemParams& p, const DiffusionMatrix& diffusion);

/// Closed form for omega1 == omega2, derived from the same stationary
/// equation. Throws DetuningNotZero or DeltaSingular.
SteadyState closed_form_steady(const SystemParams& p);

/// The closed form with the printed signs (+2 gamma sqrt(n1 n2) in the
/// Delta numerator, +gamma xi Delta in the coherence). Kept to report where
/// it departs from the numeric solution.
SteadyState printed_closed_form(const SystemParams& p);

/// Shared denominator-and-numerator factor of the closed form.
double closed_form_delta(const SystemParams& p);

struct SingularXi {
  double xi_nbar_formula = 0.0;  ///< sqrt(1 / (n1 + n2 + 1)), read as +-
  double xi_denominator = 0.0;  ///< gamma / gamma12, read as +-
};

SingularXi singular_xi(const SystemParams& p);

/// Smallest xi in (0, 1] at which solve_lyapunov stops returning a steady
/// state, located by bisection on solver success (tolerance 1e-9). Returns
/// a value > 1 when the solve succeeds on all of [0, 1).
double divergence_xi(const SystemParams& p);

struct FluxReport {
  double J = 0.0;                    ///< 2 g gamma (n2 - n1) / (4 g^2 + gamma^2)
  double J_from_theta = 0.0;         ///< -i (N12 - N21) with N = <a_i^dag a_j>
  double continuity_residual = 0.0;  ///< full population balance of mode 1
  double correlated_loss_gap = 0.0;    ///< |xi gamma12 Re N12|, the correlated-loss term
  int direction = 0;                 ///< sign(n2 - n1)
};

FluxReport flux(const SystemParams& p, const SteadyState& ss);

}  // namespace corrsync
