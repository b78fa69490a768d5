#pragma once

#include <random>

#include "corrsync/gauss_info.hpp"
#include "corrsync/model.hpp"

namespace corrsync::corpus {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi);

/// omega in [0.5, 2], g in [0, 0.5], gamma in [0, 1], xi in [-1, 1],
/// nbar in [0, 3].
SystemParams random_params(Rng& rng);

/// Resonant parameters strictly inside the stable region, with
/// |xi| gamma12 <= 0.9 gamma and gamma >= 0.05.
SystemParams random_resonant_params(Rng& rng);

/// Random element of Sp(4, R) built from local rotations, local squeezers,
/// a beam splitter and a two-mode squeezer.
Mat4 random_symplectic(Rng& rng);

/// S diag(nu1, nu1, nu2, nu2) S^T with nu_i in [1/2, 3].
QuadratureCovariance random_physical_state(Rng& rng);

}  // namespace corrsync::corpus
