#include <algorithm>
#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "corrsync/cli/corpus.hpp"
#include "corrsync/gauss_info.hpp"
#include "corrsync/steady.hpp"
#include "oracles.hpp"

using namespace corrsync;

namespace {

SystemParams make(double omega1, double omega2, double g, double gamma, double xi, double n1 = 0, double n2 = 0) {
  return {omega1, omega2, g, gamma, xi, n1, n2};
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::Config;
}

double nu_min(const SteadyState& s) { return symplectic_eigenvalues(ladder_to_quadrature(s.theta))[1]; }

}  // namespace

TEST(SolveLyapunov, IndependentThermalStates) {
  const auto s = solve_lyapunov(make(1.0, 1.4, 0, 0.3, 0, 0.7, 2.0));
  const Eigen::Vector4d diag(1.2, 1.2, 2.5, 2.5);
  EXPECT_LT((s.theta.theta - diag.cast<cplx>().asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(SolveLyapunov, CoherenceExample) {
  const auto s = solve_lyapunov(make(1, 1, 1, 0.1, 0, 0, 1));
  const Mat2c N = s.theta.mode_block();
  EXPECT_NEAR(N(0, 1).real(), 0.0, 1e-12);
  EXPECT_NEAR(N(0, 1).imag(), 0.1 / 4.01, 1e-12);
  EXPECT_NEAR(N(0, 1).imag(), 0.024938, 1e-6);
}

TEST(SolveLyapunov, Errors) {
  EXPECT_EQ(code_of([] { (void)solve_lyapunov(make(1, 1, 0.1, 0.1, 1.0)); }), ErrorCode::NoUniqueSteadyState);
  EXPECT_EQ(code_of([] { (void)solve_lyapunov(make(1, 1, 0, 0.0, 0.0)); }), ErrorCode::NoUniqueSteadyState);
  // (1, 2): the stable range ends at gamma / gamma12 = 0.9659.
  EXPECT_EQ(code_of([] { (void)solve_lyapunov(make(1, 1, 0, 1.0, 0.99, 1, 2)); }), ErrorCode::Unstable);
}

TEST(SolveLyapunov, MatchesEigenbasisOracleOverCorpus) {
  corpus::Rng rng(31);
  for (int i = 0; i < 300; ++i) {
    SystemParams p = corpus::random_params(rng);
    p.gamma = corpus::uniform(rng, 0.05, 1.0);
    const double limit = std::min(1.0, 0.9 * p.gamma / gamma12(p));
    p.xi = corpus::uniform(rng, -limit, limit);
    const SteadyState s = solve_lyapunov(p);
    const Mat4 D = oracle::printed_diffusion(p);
    const Mat4c ref = oracle::lyapunov_eigenbasis(oracle::drift(p), D.cast<cplx>());
    const double scale = std::max(1.0, ref.cwiseAbs().maxCoeff());
    EXPECT_LT((s.theta.theta - ref).cwiseAbs().maxCoeff() / scale, 1e-9);
    EXPECT_LT(s.residual, 1e-10 * D.norm());
    EXPECT_LT((s.theta.theta - s.theta.theta.adjoint()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_EQ(s.method, SteadyMethod::NumericSolve);
  }
}

TEST(SolveLyapunov, LindbladDiffusionMatchesOracle) {
  const SystemParams p = make(1, 1.1, 0.4, 0.3, 0.6, 0.3, 0.8);
  const SteadyState s = solve_lyapunov(p, build_lindblad_diffusion(p));
  const Mat4c ref = oracle::lyapunov_eigenbasis(oracle::drift(p), build_lindblad_diffusion(p).D.cast<cplx>());
  EXPECT_LT((s.theta.theta - ref).cwiseAbs().maxCoeff(), 1e-12);
}

// The printed diffusion matrix gives unphysical stationary states in part of
// the stable region; the channel-consistent one never does.
TEST(SolveLyapunov, PhysicalityDependsOnDiffusionModel) {
  const SystemParams bad = make(1, 1, 0.667, 0.259, 0.576, 0.128, 0.013);
  EXPECT_LT(nu_min(solve_lyapunov(bad)), 0.45);
  EXPECT_GE(nu_min(solve_lyapunov(bad, build_lindblad_diffusion(bad))), 0.5 - 1e-10);

  corpus::Rng rng(37);
  for (int i = 0; i < 500; ++i) {
    const SystemParams p = corpus::random_resonant_params(rng);
    EXPECT_GE(nu_min(solve_lyapunov(p, build_lindblad_diffusion(p))), 0.5 - 1e-10);
  }
  // Reference configurations stay physical with either matrix.
  for (double xi : {0.0, 0.3, 0.6, 0.7}) {
    EXPECT_GE(nu_min(solve_lyapunov(make(1, 1, 1, 0.1, xi, 0, 1))), 0.5 - 1e-10);
    EXPECT_GE(nu_min(solve_lyapunov(make(1, 1, 1, 0.1, xi, 0.5, 0.5))), 0.5 - 1e-10);
  }
}

TEST(ClosedForm, Examples) {
  const auto a = closed_form_steady(make(1, 1, 0, 0.3, 0, 0.4, 1.2));
  EXPECT_NEAR(a.theta.mode_block()(0, 0).real(), 0.9, 1e-15);
  EXPECT_EQ(a.method, SteadyMethod::ClosedForm);

  const Mat2c N = closed_form_steady(make(1, 1, 1, 0.1, 0, 0, 1)).theta.mode_block();
  EXPECT_NEAR(N(0, 0).real(), 0.5 + 2.0 / 4.01, 1e-14);
  EXPECT_NEAR(N(0, 0).real(), 0.99875, 1e-5);
  EXPECT_NEAR(N(1, 1).real(), 1.00125, 1e-5);
}

// gamma = 1, T = 0, xi = 0.5, g = 0: Delta = 2/3. The stationary equation
// gives Re N12 = -gamma xi Delta = -1/3; the printed form has +.
TEST(ClosedForm, CoherenceSignAgainstPrintedForm) {
  const SystemParams p = make(1, 1, 0, 1.0, 0.5);
  EXPECT_NEAR(closed_form_delta(p), 2.0 / 3.0, 1e-15);
  const Mat4c ref = oracle::lyapunov_eigenbasis(oracle::drift(p), oracle::printed_diffusion(p).cast<cplx>());
  EXPECT_NEAR(oracle::mode_block(ref)(0, 1).real(), -1.0 / 3.0, 1e-13);
  EXPECT_NEAR(closed_form_steady(p).theta.mode_block()(0, 1).real(), -1.0 / 3.0, 1e-15);
  EXPECT_NEAR(printed_closed_form(p).theta.mode_block()(0, 1).real(), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(printed_closed_form(p).method, SteadyMethod::PrintedClosedForm);
}

TEST(ClosedForm, Errors) {
  EXPECT_EQ(code_of([] { (void)closed_form_steady(make(1, 1.1, 0, 0.1, 0)); }), ErrorCode::DetuningNotZero);
  EXPECT_EQ(code_of([] { (void)closed_form_steady(make(1, 1, 0, 0.5, 1.0)); }), ErrorCode::DeltaSingular);
}

TEST(ClosedForm, AgreesWithNumericSolveOverCorpus) {
  corpus::Rng rng(41);
  for (int i = 0; i < 1000; ++i) {
    const SystemParams p = corpus::random_resonant_params(rng);
    const Mat4c num = solve_lyapunov(p).theta.theta;
    const Mat4c cf = closed_form_steady(p).theta.theta;
    const double scale = std::max(1.0, num.cwiseAbs().maxCoeff());
    EXPECT_LT((num - cf).cwiseAbs().maxCoeff() / scale, 1e-9);
  }
}

TEST(SingularXi, Examples) {
  const auto t0 = singular_xi(make(1, 1, 1, 0.1, 0));
  EXPECT_DOUBLE_EQ(t0.xi_nbar_formula, 1.0);
  EXPECT_DOUBLE_EQ(t0.xi_denominator, 1.0);

  const auto equal = singular_xi(make(1, 1, 1, 1.0, 0, 1, 1));
  EXPECT_NEAR(equal.xi_nbar_formula, 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(equal.xi_denominator, 1.0, 1e-15);

  const auto agree = singular_xi(make(1, 1, 1, 0.1, 0, 0, 1));
  EXPECT_NEAR(agree.xi_nbar_formula, 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(agree.xi_denominator, 1.0 / std::sqrt(2.0), 1e-15);
}

// The located edge sits just inside the root because the near-singular guard
// rejects solves slightly before the drift loses stability.
TEST(DivergenceXi, LocatedAtDenominatorRoot) {
  EXPECT_NEAR(divergence_xi(make(1, 1, 1, 0.1, 0, 0, 1)), 1.0 / std::sqrt(2.0), 1e-4);
  const SystemParams p = make(1, 1, 1, 0.1, 0, 1, 2);
  const double expected = 1.0 / (std::sqrt(6.0) - std::sqrt(2.0));
  EXPECT_NEAR(divergence_xi(p), expected, 1e-4);
  EXPECT_GT(std::abs(divergence_xi(p) - singular_xi(p).xi_nbar_formula), 0.4);
}

TEST(Flux, Examples) {
  const SystemParams p = make(1, 1, 0.1, 0.1, 0.0, 0.0, 1.0);
  const FluxReport f = flux(p, solve_lyapunov(p));
  EXPECT_NEAR(f.J, 0.4, 1e-15);
  EXPECT_NEAR(f.J_from_theta, 0.4, 1e-12);
  EXPECT_EQ(f.direction, 1);

  const SystemParams equal = make(1, 1, 0.5, 0.2, 0.3, 0.7, 0.7);
  EXPECT_EQ(flux(equal, solve_lyapunov(equal)).J, 0.0);
  const SystemParams uncoupled = make(1, 1, 0.0, 0.2, 0.3, 0.1, 0.7);
  EXPECT_EQ(flux(uncoupled, solve_lyapunov(uncoupled)).J, 0.0);
  EXPECT_NEAR(flux(uncoupled, solve_lyapunov(uncoupled)).J_from_theta, 0.0, 1e-14);
}

TEST(Flux, IndependentOfCorrelation) {
  const double base = flux(make(1, 1, 0.3, 0.2, 0.0, 0.2, 1.1), solve_lyapunov(make(1, 1, 0.3, 0.2, 0.0, 0.2, 1.1))).J;
  for (double xi : {-0.9, 0.0, 0.9}) {
    SystemParams p = make(1, 1, 0.3, 0.2, xi, 0.2, 1.1);
    p.xi = std::clamp(xi, -0.9 * p.gamma / gamma12(p), 0.9 * p.gamma / gamma12(p));
    const FluxReport f = flux(p, solve_lyapunov(p));
    EXPECT_NEAR(f.J, base, 1e-12);
    EXPECT_NEAR(f.J_from_theta, base, 1e-10);
  }
}

TEST(Flux, ContinuityOverCorpus) {
  corpus::Rng rng(43);
  for (int i = 0; i < 500; ++i) {
    const SystemParams p = corpus::random_resonant_params(rng);
    const SteadyState s = solve_lyapunov(p);
    const FluxReport f = flux(p, s);
    EXPECT_LT(f.continuity_residual, 1e-10);
    EXPECT_NEAR(f.J, f.J_from_theta, 1e-10);
    // The correlated-loss term is the part the reduced balance leaves out.
    EXPECT_NEAR(f.correlated_loss_gap, std::abs(p.xi * gamma12(p) * s.theta.mode_block()(0, 1).real()), 1e-14);
  }
}

TEST(Symmetry, ModeSwapTransposesAndNegatesFlux) {
  const SystemParams p = make(1.0, 1.15, 0.4, 0.3, 0.5, 0.2, 1.3);
  const SystemParams q = make(1.15, 1.0, 0.4, 0.3, 0.5, 1.3, 0.2);
  const Mat2c a = solve_lyapunov(p).theta.mode_block();
  const Mat2c b = solve_lyapunov(q).theta.mode_block();
  EXPECT_NEAR(std::abs(a(0, 0) - b(1, 1)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(a(0, 1) - b(1, 0)), 0.0, 1e-12);
  EXPECT_NEAR(flux(p, solve_lyapunov(p)).J, -flux(q, solve_lyapunov(q)).J, 1e-15);
}
