#include "corrsync/gauss_info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>

#include "corrsync/optim.hpp"

namespace corrsync {

namespace {

// Columns map quadratures to ladder operators: x = U r.
Mat4c ladder_basis() {
  const double h = 1.0 / std::sqrt(2.0);
  Mat4c U = Mat4c::Zero();
  for (int m = 0; m < 2; ++m) {
    const int o = 2 * m;
    U(o, o) = h;
    U(o, o + 1) = kI * h;
    U(o + 1, o) = h;
    U(o + 1, o + 1) = -kI * h;
  }
  return U;
}

template <class M>
void require_positive_definite(const M& m, const char* what) {
  Eigen::LLT<M> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, std::string(what) + " is not positive definite");
  }
}

double log_det(const Mat2& m) { return std::log(m.determinant()); }

double log_det(const Mat4& m) {
  Eigen::LLT<Mat4> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "covariance is not positive definite");
  }
  const auto& L = llt.matrixL();
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) acc += std::log(L(i, i));
  return 2.0 * acc;
}

double wrap_angle(double phi) {
  phi = std::fmod(phi, std::numbers::pi);
  return phi < 0.0 ? phi + std::numbers::pi : phi;
}

}  // namespace

Mat4 symplectic_form() {
  Mat4 omega = Mat4::Zero();
  omega(0, 1) = omega(2, 3) = 1.0;
  omega(1, 0) = omega(3, 2) = -1.0;
  return omega;
}

QuadratureCovariance ladder_to_quadrature(const CovarianceState& theta) {
  const double asym = (theta.theta - theta.theta.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) {
    throw Error(ErrorCode::NotHermitian,
                "ladder covariance deviates from Hermitian by " + std::to_string(asym));
  }
  const Mat4c U = ladder_basis();
  const Mat4c s = U.adjoint() * theta.theta * U;
  QuadratureCovariance q;
  q.sigma = 0.5 * (s.real() + s.real().transpose());
  return q;
}

CovarianceState quadrature_to_ladder(const QuadratureCovariance& q, double t) {
  const Mat4c U = ladder_basis();
  return {t, U * q.sigma.cast<cplx>() * U.adjoint()};
}

std::array<double, 2> symplectic_eigenvalues(const QuadratureCovariance& q) {
  require_positive_definite(q.sigma, "quadrature covariance");
  Eigen::EigenSolver<Mat4> es(symplectic_form() * q.sigma, false);
  std::vector<double> nu;
  for (int i = 0; i < 4; ++i) {
    const double im = es.eigenvalues()(i).imag();
    if (im > 0.0) nu.push_back(im);
  }
  // Exactly degenerate pairs can come back with a zero imaginary part split
  // between them; fall back on the invariant-based formula then.
  if (nu.size() != 2) {
    const Mat2 A = q.block_a();
    const Mat2 B = q.block_b();
    const Mat2 C = q.correlations();
    const double seralian = A.determinant() + B.determinant() + 2.0 * C.determinant();
    const double det = q.sigma.determinant();
    const double disc = std::sqrt(std::max(0.0, seralian * seralian - 4.0 * det));
    nu = {std::sqrt((seralian + disc) / 2.0), std::sqrt(std::max(0.0, (seralian - disc) / 2.0))};
  }
  std::sort(nu.begin(), nu.end(), std::greater<>());
  return {nu[0], nu[1]};
}

PhysicalityResult physicality_check(const QuadratureCovariance& q) {
  const Mat4c m = q.sigma.cast<cplx>() + 0.5 * kI * symplectic_form().cast<cplx>();
  Eigen::SelfAdjointEigenSolver<Mat4c> es(m, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  return {lo >= -1e-10, lo};
}

double renyi2_entropy(const QuadratureCovariance& q, Modes modes) {
  switch (modes) {
    case Modes::Both:
      return 0.5 * log_det(q.sigma) + 2.0 * std::log(2.0);
    case Modes::A:
      require_positive_definite(q.block_a(), "mode A block");
      return 0.5 * log_det(q.block_a()) + std::log(2.0);
    case Modes::B:
      require_positive_definite(q.block_b(), "mode B block");
      return 0.5 * log_det(q.block_b()) + std::log(2.0);
  }
  return 0.0;
}

double mutual_information(const QuadratureCovariance& q) {
  require_positive_definite(q.block_a(), "mode A block");
  require_positive_definite(q.block_b(), "mode B block");
  return 0.5 * (log_det(q.block_a()) + log_det(q.block_b()) - log_det(q.sigma));
}

Mat2 measurement_seed(double s, double phi) {
  const double c = std::cos(phi);
  const double sn = std::sin(phi);
  Mat2 R;
  R << c, -sn, sn, c;
  return 0.5 * R * Eigen::Vector2d(s, 1.0 / s).asDiagonal() * R.transpose();
}

double conditional_information(const QuadratureCovariance& q, double s, double phi) {
  double log_s = std::clamp(std::log(s), -kSeedLogRange, kSeedLogRange);
  // seed(s, phi) = seed(1/s, phi + pi/2), so work with t = s >= 1.
  if (log_s < 0.0) {
    log_s = -log_s;
    phi += std::numbers::pi / 2.0;
  }
  const double t = std::exp(log_s);
  const double c = std::cos(phi);
  const double sn = std::sin(phi);
  Mat2 R;
  R << c, -sn, sn, c;
  // In the seed frame B + seed = B' + diag(t, 1/t) / 2. Its inverse is
  // written with every entry divided by t so large t does not cancel.
  const Mat2 Bp = R.transpose() * q.block_b() * R;
  const double b11 = Bp(0, 0) / t + 0.5;
  const double b22 = Bp(1, 1) + 0.5 / t;
  const double b12 = Bp(0, 1);
  const double det = b11 * b22 - b12 * b12 / t;
  Mat2 inv;
  inv << b22 / t, -b12 / t, -b12 / t, b11;
  inv /= det;
  const Mat2 A = q.block_a();
  const Mat2 Cp = q.correlations() * R;
  const Mat2 conditional = A - Cp * inv * Cp.transpose();
  return 0.5 * (log_det(A) - log_det(conditional));
}

ClassicalCorrelations classical_correlations(const QuadratureCovariance& q) {
  constexpr int kGridS = 32;
  constexpr int kGridPhi = 16;
  constexpr double kStepU = 2.0 * kSeedLogRange / (kGridS - 1);
  constexpr double kStepPhi = std::numbers::pi / kGridPhi;

  ClassicalCorrelations out;
  auto objective = [&](const optim::Point<2>& x) {
    ++out.evaluations;
    const double u = std::clamp(x[0], -kSeedLogRange, kSeedLogRange);
    return -conditional_information(q, std::exp(u), x[1]);
  };

  struct Candidate {
    double value;
    optim::Point<2> x;
  };
  std::vector<Candidate> grid;
  grid.reserve(kGridS * kGridPhi);
  for (int i = 0; i < kGridS; ++i) {
    for (int j = 0; j < kGridPhi; ++j) {
      const optim::Point<2> x{-kSeedLogRange + i * kStepU, j * kStepPhi};
      grid.push_back({objective(x), x});
    }
  }
  std::partial_sort(grid.begin(), grid.begin() + 3, grid.end(),
                    [](const Candidate& a, const Candidate& b) { return a.value < b.value; });

  double best = grid.front().value;
  optim::Point<2> arg = grid.front().x;
  bool any_converged = false;
  for (int k = 0; k < 3; ++k) {
    auto res = optim::nelder_mead<2>(objective, grid[k].x, {kStepU / 2.0, kStepPhi / 2.0});
    any_converged = any_converged || res.converged;
    // Restart from the best vertex until a fresh simplex stops improving;
    // a collapsed simplex can stall on the flat ridge along ln s.
    double step = 0.1;
    for (int restart = 0; restart < 8 && res.converged; ++restart, step *= 0.5) {
      const auto next = optim::nelder_mead<2>(objective, res.x, {step, step});
      const bool improved = next.fx < res.fx - 1e-13 * std::abs(res.fx);
      if (next.fx < res.fx) res = next;
      if (!improved) break;
    }
    if (res.fx < best) {
      best = res.fx;
      arg = res.x;
    }
  }
  if (!any_converged) {
    throw Error(ErrorCode::OptimizationDidNotConverge,
                "measurement-seed search did not reach 1e-10 relative improvement");
  }

  out.J2 = std::max(0.0, -best);
  out.s = std::exp(std::clamp(arg[0], -kSeedLogRange, kSeedLogRange));
  out.phi = wrap_angle(arg[1]);

  // Homodyne limit s -> inf, which the clamped search only approaches to
  // O(e^-20). Measuring v^T r_B leaves det A (1 - v^T C^T A^-1 C v / v^T B v),
  // so the best direction is the top generalized eigenvector.
  const Mat2 A = q.block_a();
  const Mat2 C = q.correlations();
  const Mat2 K = C.transpose() * A.inverse() * C;
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat2> ges(0.5 * (K + K.transpose()), q.block_b());
  if (ges.info() == Eigen::Success) {
    const double top = ges.eigenvalues()(1);
    if (top > 0.0 && top < 1.0) {
      const double homodyne = -0.5 * std::log1p(-top);
      if (homodyne > out.J2) {
        const Eigen::Vector2d v = ges.eigenvectors().col(1);
        out.J2 = homodyne;
        out.s = std::numeric_limits<double>::infinity();
        out.phi = wrap_angle(std::atan2(-v(0), v(1)));
      }
    }
  }
  return out;
}

double gaussian_discord(const QuadratureCovariance& q) {
  const double d = mutual_information(q) - classical_correlations(q).J2;
  return (d < 0.0 && d > -1e-9) ? 0.0 : d;
}

double discord_lower_bound(const CovarianceState& theta) {
  const QuadratureCovariance q = ladder_to_quadrature(theta);
  return std::max(0.0, mutual_information(q) - renyi2_entropy(q, Modes::A));
}

InfoReport info_report(const CovarianceState& theta) {
  const QuadratureCovariance q = ladder_to_quadrature(theta);
  InfoReport r;
  r.S2_A = renyi2_entropy(q, Modes::A);
  r.S2_B = renyi2_entropy(q, Modes::B);
  r.S2_AB = renyi2_entropy(q, Modes::Both);
  r.I2 = mutual_information(q);
  r.seed = classical_correlations(q);
  r.J2 = r.seed.J2;
  const double d = r.I2 - r.J2;
  r.D2 = (d < 0.0 && d > -1e-9) ? 0.0 : d;
  r.D2_lower = std::max(0.0, r.I2 - r.S2_A);
  r.nu = symplectic_eigenvalues(q);
  return r;
}

}  // namespace corrsync
