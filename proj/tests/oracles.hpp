#pragma once

// Reference computations for the tests. Each one takes a different route
// from the library code it checks.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "corrsync/model.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;
using Mat4 = Eigen::Matrix4d;
using Mat2 = Eigen::Matrix2d;
inline const cplx I{0.0, 1.0};

inline double gamma12(double gamma, double n1, double n2) {
  return gamma * (std::sqrt((n1 + 1.0) * (n2 + 1.0)) - std::sqrt(n1 * n2));
}

/// Reduced moment matrix written out from the equations of motion.
inline Mat2c reduced_matrix(const corrsync::SystemParams& p) {
  const double g12 = gamma12(p.gamma, p.nbar1, p.nbar2);
  Mat2c M;
  M(0, 0) = cplx(p.omega1, -p.gamma / 2.0);
  M(1, 1) = cplx(p.omega2, -p.gamma / 2.0);
  M(0, 1) = M(1, 0) = cplx(p.g, -p.xi * g12 / 2.0);
  return M;
}

/// Eigenvalues of M from a general dense solver, sorted by real part then
/// imaginary part (descending).
inline std::pair<cplx, cplx> dense_eigenvalues(const corrsync::SystemParams& p) {
  Eigen::ComplexEigenSolver<Mat2c> es(reduced_matrix(p));
  cplx a = es.eigenvalues()(0), b = es.eigenvalues()(1);
  if (a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag())) std::swap(a, b);
  return {a, b};
}

/// Full drift in ladder order (a1, a1^dag, a2, a2^dag).
inline Mat4c drift(const corrsync::SystemParams& p) {
  const Mat2c A = -I * reduced_matrix(p);
  Mat4c W = Mat4c::Zero();
  const int a[2] = {0, 2};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      W(a[i], a[j]) = A(i, j);
      W(a[i] + 1, a[j] + 1) = std::conj(A(i, j));
    }
  }
  return W;
}

inline Mat4 printed_diffusion(const corrsync::SystemParams& p) {
  Mat4 D = Mat4::Zero();
  D(0, 0) = D(1, 1) = p.gamma * (0.5 + p.nbar1);
  D(2, 2) = D(3, 3) = p.gamma * (0.5 + p.nbar2);
  const double c = p.xi * p.gamma * std::sqrt(p.nbar1 * p.nbar2);
  D(0, 2) = D(2, 0) = D(1, 3) = D(3, 1) = c;
  return D;
}

/// Stationary solution of W X + X W^dag + D = 0 by diagonalizing W:
/// in the eigenbasis X~_ij = -C~_ij / (l_i + conj l_j).
inline Mat4c lyapunov_eigenbasis(const Mat4c& W, const Mat4c& D) {
  Eigen::ComplexEigenSolver<Mat4c> es(W);
  const Mat4c V = es.eigenvectors();
  const Mat4c Vi = V.inverse();
  const Mat4c C = Vi * D * Vi.adjoint();
  Mat4c Xt;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Xt(i, j) = -C(i, j) / (es.eigenvalues()(i) + std::conj(es.eigenvalues()(j)));
    }
  }
  return V * Xt * V.adjoint();
}

/// Mode block <a_i^dag a_j> + delta/2 read off a stored covariance.
inline Mat2c mode_block(const Mat4c& theta) {
  Mat2c N;
  N << theta(0, 0), theta(2, 0), theta(0, 2), theta(2, 2);
  return N;
}

/// Symplectic eigenvalues of a two-mode covariance from its invariants.
inline std::pair<double, double> williamson(const Mat4& s) {
  const double a = s.topLeftCorner<2, 2>().determinant();
  const double b = s.bottomRightCorner<2, 2>().determinant();
  const double c = s.topRightCorner<2, 2>().determinant();
  const double delta = a + b + 2.0 * c;
  const double det = s.determinant();
  const double root = std::sqrt(std::max(0.0, delta * delta - 4.0 * det));
  return {std::sqrt((delta + root) / 2.0), std::sqrt((delta - root) / 2.0)};
}

/// Quadrature covariance from the stored ladder covariance, entry by entry:
/// x = (a + a^dag)/sqrt2, p = (a - a^dag)/(i sqrt2).
inline Mat4 quadrature(const Mat4c& theta) {
  // Rows express (x1, p1, x2, p2) in terms of (a1, a1^dag, a2, a2^dag).
  Mat4c R = Mat4c::Zero();
  const double r = 1.0 / std::sqrt(2.0);
  for (int m = 0; m < 2; ++m) {
    R(2 * m, 2 * m) = r;
    R(2 * m, 2 * m + 1) = r;
    R(2 * m + 1, 2 * m) = -I * r;
    R(2 * m + 1, 2 * m + 1) = I * r;
  }
  // q_l is Hermitian, so q_l = sum conj(R_lj) x_j^dag and
  // sigma_kl = sum R_ki conj(R_lj) theta_ij.
  const Mat4c s = R * theta * R.adjoint();
  return s.real();
}

/// Conditional information 1/2 ln(det A / det(A - C (B + seed)^-1 C^T)).
inline double conditional(const Mat4& s, double log_s, double phi) {
  const Mat2 A = s.topLeftCorner<2, 2>();
  const Mat2 B = s.bottomRightCorner<2, 2>();
  const Mat2 C = s.topRightCorner<2, 2>();
  const double c = std::cos(phi), sn = std::sin(phi);
  const double e = std::exp(log_s);
  Mat2 seed;
  seed(0, 0) = 0.5 * (c * c * e + sn * sn / e);
  seed(1, 1) = 0.5 * (sn * sn * e + c * c / e);
  seed(0, 1) = seed(1, 0) = 0.5 * c * sn * (e - 1.0 / e);
  const Mat2 cond = A - C * (B + seed).inverse() * C.transpose();
  return 0.5 * std::log(A.determinant() / cond.determinant());
}

/// Brute-force supremum over a 400 x 180 grid: ln s = -20 + 0.1 k,
/// phi = j pi / 180.
inline double grid_J2(const Mat4& s) {
  double best = -1e300;
  for (int k = 0; k < 400; ++k) {
    for (int j = 0; j < 180; ++j) {
      best = std::max(best, conditional(s, -20.0 + 0.1 * k, j * std::numbers::pi / 180.0));
    }
  }
  return best;
}

/// Heterodyne value for a state with sigma_A = a I, sigma_B = b I and a
/// correlation block that is a multiple of a rotation or reflection.
inline double heterodyne_J2(const Mat4& s) {
  const double a = s(0, 0);
  const double b = s(2, 2);
  const double c2 = s.topRightCorner<2, 2>().determinant();
  const double k2 = std::abs(c2);
  const double cond = a - k2 / (b + 0.5);
  return std::log(a / cond);
}

/// Local minimum of |lambda+ - lambda-| in xi for g != 0, from the
/// discriminant z^2 + delta^2 with z = 2g - i xi g12.
inline double critical_xi(double g, double delta, double g12) {
  const double d2 = delta * delta - 4.0 * g * g;
  return d2 > 0.0 ? std::sqrt(d2) / g12 : 0.0;
}

inline double det2(const Mat2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

/// Mutual information from block determinants.
inline double mutual_information(const Mat4& s) {
  return 0.5 * std::log(det2(s.topLeftCorner<2, 2>()) * det2(s.bottomRightCorner<2, 2>()) / s.determinant());
}

/// Two-mode squeezed thermal state: nu on each mode, squeezing r.
inline Mat4 squeezed_thermal(double nu1, double nu2, double r) {
  const double ch = std::cosh(2.0 * r), sh = std::sinh(2.0 * r);
  const double a = 0.5 * (nu1 + nu2) * ch + 0.5 * (nu1 - nu2);
  const double b = 0.5 * (nu1 + nu2) * ch - 0.5 * (nu1 - nu2);
  const double c = 0.5 * (nu1 + nu2) * sh;
  Mat4 s = Mat4::Zero();
  s(0, 0) = s(1, 1) = a;
  s(2, 2) = s(3, 3) = b;
  s(0, 2) = s(2, 0) = c;
  s(1, 3) = s(3, 1) = -c;
  return s;
}

}  // namespace oracle
