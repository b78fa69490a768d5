#include "corrsync/cli/corpus.hpp"

#include <cmath>
#include <numbers>

namespace corrsync::corpus {

double uniform(Rng& rng, double lo, double hi) {
  // Not std::uniform_real_distribution: its output is implementation-defined,
  // and the corpora must be identical across standard libraries.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

SystemParams random_params(Rng& rng) {
  SystemParams p;
  p.omega1 = uniform(rng, 0.5, 2.0);
  p.omega2 = uniform(rng, 0.5, 2.0);
  p.g = uniform(rng, 0.0, 0.5);
  p.gamma = uniform(rng, 0.0, 1.0);
  p.xi = uniform(rng, -1.0, 1.0);
  p.nbar1 = uniform(rng, 0.0, 3.0);
  p.nbar2 = uniform(rng, 0.0, 3.0);
  return p;
}

SystemParams random_resonant_params(Rng& rng) {
  SystemParams p;
  p.omega1 = p.omega2 = uniform(rng, 0.5, 2.0);
  p.g = uniform(rng, 0.0, 1.0);
  p.gamma = uniform(rng, 0.05, 1.0);
  p.nbar1 = uniform(rng, 0.0, 3.0);
  p.nbar2 = uniform(rng, 0.0, 3.0);
  const double limit = 0.9 * p.gamma / gamma12(p);
  p.xi = uniform(rng, -limit, limit);
  return p;
}

namespace {

Mat4 local(const Mat2& a, const Mat2& b) {
  Mat4 m = Mat4::Zero();
  m.topLeftCorner<2, 2>() = a;
  m.bottomRightCorner<2, 2>() = b;
  return m;
}

Mat2 rotation(double th) {
  Mat2 r;
  r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  return r;
}

Mat2 squeezer(double r) { return Eigen::Vector2d(std::exp(-r), std::exp(r)).asDiagonal(); }

}  // namespace

Mat4 random_symplectic(Rng& rng) {
  const double pi = std::numbers::pi;
  const Mat4 rot1 = local(rotation(uniform(rng, 0, pi)), rotation(uniform(rng, 0, pi)));
  const Mat4 sq = local(squeezer(uniform(rng, -0.8, 0.8)), squeezer(uniform(rng, -0.8, 0.8)));
  const Mat4 rot2 = local(rotation(uniform(rng, 0, pi)), rotation(uniform(rng, 0, pi)));

  const double th = uniform(rng, 0, pi);
  Mat4 bs = Mat4::Zero();
  bs.topLeftCorner<2, 2>() = std::cos(th) * Mat2::Identity();
  bs.topRightCorner<2, 2>() = std::sin(th) * Mat2::Identity();
  bs.bottomLeftCorner<2, 2>() = -std::sin(th) * Mat2::Identity();
  bs.bottomRightCorner<2, 2>() = std::cos(th) * Mat2::Identity();

  const double r = uniform(rng, 0.0, 0.8);
  const Mat2 Z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  Mat4 tms = Mat4::Zero();
  tms.topLeftCorner<2, 2>() = std::cosh(r) * Mat2::Identity();
  tms.bottomRightCorner<2, 2>() = std::cosh(r) * Mat2::Identity();
  tms.topRightCorner<2, 2>() = std::sinh(r) * Z;
  tms.bottomLeftCorner<2, 2>() = std::sinh(r) * Z;

  return rot2 * tms * bs * sq * rot1;
}

QuadratureCovariance random_physical_state(Rng& rng) {
  const double nu1 = uniform(rng, 0.5, 3.0);
  const double nu2 = uniform(rng, 0.5, 3.0);
  const Mat4 S = random_symplectic(rng);
  const Mat4 d = Eigen::Vector4d(nu1, nu1, nu2, nu2).asDiagonal();
  QuadratureCovariance q;
  q.sigma = S * d * S.transpose();
  q.sigma = (0.5 * (q.sigma + q.sigma.transpose())).eval();
  return q;
}

}  // namespace corrsync::corpus
