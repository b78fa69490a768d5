#pragma once

#include "corrsync/types.hpp"

namespace corrsync {

/// First moments (<a1>, <a1^dag>, <a2>, <a2^dag>) at time t.
struct MomentState {
  double t = 0.0;
  Vec4c x = Vec4c::Zero();

  cplx a1() const { return x(kA1); }
  cplx a2() const { return x(kA2); }

  /// Builds a paired state from the two complex displacements.
  static MomentState displaced(cplx alpha1, cplx alpha2, double t = 0.0) {
    MomentState s;
    s.t = t;
    s.x << alpha1, std::conj(alpha1), alpha2, std::conj(alpha2);
    return s;
  }
};

/// Symmetrized ladder covariance. Stored as theta_ij = 1/2 <{dx_i, dx_j^dag}>
/// so that d(theta)/dt = W theta + theta W^dag + D holds exactly. The
/// mode-space matrix <a_i^dag a_j> + delta_ij/2 is its transpose on the
/// a-sector, available through mode_block().
struct CovarianceState {
  double t = 0.0;
  Mat4c theta = 0.5 * Mat4c::Identity();

  static CovarianceState vacuum(double t = 0.0) { return {t, 0.5 * Mat4c::Identity()}; }

  static CovarianceState thermal(double nbar1, double nbar2, double t = 0.0) {
    CovarianceState s{t, Mat4c::Zero()};
    s.theta(kA1, kA1) = s.theta(kA1dag, kA1dag) = nbar1 + 0.5;
    s.theta(kA2, kA2) = s.theta(kA2dag, kA2dag) = nbar2 + 0.5;
    return s;
  }

  /// (<a_i^dag a_j> + delta_ij / 2) for i, j in {1, 2}.
  Mat2c mode_block() const {
    Mat2c m;
    m << theta(kA1, kA1), theta(kA2, kA1), theta(kA1, kA2), theta(kA2, kA2);
    return m;
  }

  double occupation(int mode) const {
    const int i = mode == 0 ? kA1 : kA2;
    return theta(i, i).real() - 0.5;
  }

  void hermitize() { theta = (0.5 * (theta + theta.adjoint())).eval(); }
};

}  // namespace corrsync
