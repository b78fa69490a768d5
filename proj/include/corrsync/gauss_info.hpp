#pragma once

#include <array>

#include "corrsync/state.hpp"
#include "corrsync/types.hpp"

namespace corrsync {

/// Real covariance in the quadrature basis (x1, p1, x2, p2) with
/// a = (x + i p) / sqrt(2); the vacuum is I/2.
struct QuadratureCovariance {
  Mat4 sigma = 0.5 * Mat4::Identity();

  Mat2 block_a() const { return sigma.topLeftCorner<2, 2>(); }
  Mat2 block_b() const { return sigma.bottomRightCorner<2, 2>(); }
  Mat2 correlations() const { return sigma.topRightCorner<2, 2>(); }
};

/// Block-diagonal symplectic form, one [[0, 1], [-1, 0]] block per mode.
Mat4 symplectic_form();

QuadratureCovariance ladder_to_quadrature(const CovarianceState& theta);
CovarianceState quadrature_to_ladder(const QuadratureCovariance& q, double t = 0.0);

/// Williamson invariants, sorted descending. Throws NotPositiveDefinite.
std::array<double, 2> symplectic_eigenvalues(const QuadratureCovariance& q);

struct PhysicalityResult {
  bool pass = true;
  double min_eigenvalue = 0.0;  ///< smallest eigenvalue of sigma + (i/2) Omega
};

PhysicalityResult physicality_check(const QuadratureCovariance& q);

enum class Modes { Both, A, B };

/// Renyi-2 entropy in nats, normalized so the vacuum has zero entropy.
double renyi2_entropy(const QuadratureCovariance& q, Modes modes);

double mutual_information(const QuadratureCovariance& q);

/// Pure single-mode Gaussian measurement seed 1/2 R(phi) diag(s, 1/s) R(phi)^T.
Mat2 measurement_seed(double s, double phi);

/// 1/2 ln(det sigma_A / det sigma_A|Pi) for a measurement on B with the
/// given seed. Clamps ln s to [-kSeedLogRange, kSeedLogRange].
double conditional_information(const QuadratureCovariance& q, double s, double phi);

inline constexpr double kSeedLogRange = 20.0;

struct ClassicalCorrelations {
  double J2 = 0.0;
  double s = 1.0;    ///< optimal seed squeezing; +inf for homodyne
  double phi = 0.0;  ///< optimal seed angle in [0, pi)
  int evaluations = 0;
};

/// Supremum of conditional_information over pure seeds: coarse 32x16 grid in
/// (ln s, phi), then simplex refinement from the three best grid points,
/// compared against the exact homodyne limit.
/// Throws OptimizationDidNotConverge.
ClassicalCorrelations classical_correlations(const QuadratureCovariance& q);

/// I2 - J2, clipped to zero when within 1e-9 below.
double gaussian_discord(const QuadratureCovariance& q);

/// Coherence-removal bound max(0, I2 - S2(A)) = max(0, S2(B) - S2(AB)).
/// Zeroing the inter-mode block removes I2 of correlation, of which a
/// Gaussian measurement on B can recover at most S2(A) since every
/// conditional state of A has det >= 1/4.
double discord_lower_bound(const CovarianceState& theta);

struct InfoReport {
  double S2_A = 0.0;
  double S2_B = 0.0;
  double S2_AB = 0.0;
  double I2 = 0.0;
  double J2 = 0.0;
  double D2 = 0.0;
  double D2_lower = 0.0;
  std::array<double, 2> nu{0.5, 0.5};
  ClassicalCorrelations seed;
};

InfoReport info_report(const CovarianceState& theta);

}  // namespace corrsync
