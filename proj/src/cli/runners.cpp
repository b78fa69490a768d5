#include "corrsync/cli/runners.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "CLI11.hpp"

#include "corrsync/cli/corpus.hpp"
#include "corrsync/dynamics.hpp"
#include "corrsync/gauss_info.hpp"
#include "corrsync/steady.hpp"

namespace corrsync::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr const char* kOutputDirEnv = "CORRSYNC_OUTPUT_DIR";

int worker_count(const RunConfig& cfg, std::size_t jobs) {
  int n = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(1, n);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(jobs, 1)));
}

// Evaluates f(0..n-1) on a worker pool; results come back in index order.
// The first exception in index order is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, int workers, const std::function<T(std::size_t)>& f) {
  std::vector<std::optional<T>> out(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  std::vector<T> result;
  result.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    result.push_back(std::move(*out[i]));
  }
  return result;
}

ResultTable base_table(const RunConfig& cfg) {
  ResultTable t;
  t.config_echo = cfg.to_json();
  t.provenance.push_back(std::string("version: ") + kVersion);
  t.provenance.push_back("subcommand: " + std::string(to_string(cfg.subcommand)));
  return t;
}

std::vector<double> sweep_points(const RunConfig& cfg, std::string& axis) {
  if (cfg.sweep) {
    axis = cfg.sweep->axis;
    return cfg.sweep->values();
  }
  axis = "xi";
  return {cfg.params.xi};
}

// ---------------------------------------------------------------- spectrum

}  // namespace

ResultTable run_spectrum(const RunConfig& cfg) {
  ResultTable table = base_table(cfg);
  std::string axis;
  const std::vector<double> xs = sweep_points(cfg, axis);
  const bool with_series = cfg.series.has_value();
  const std::vector<double> series = with_series ? cfg.series->values : std::vector<double>{0.0};

  table.provenance.push_back("sweep_axis: " + axis);
  if (with_series) table.provenance.push_back("series_axis: " + cfg.series->axis);
  table.provenance.push_back(
      "offset: im_lambda_*_offset = Im lambda + gamma/2, so a branch damped at gamma/2 reads 0; "
      "raw Im lambda is in im_lambda_*");
  table.provenance.push_back("xi_crit: nan when no threshold lies in [0, 1] or gamma12 = 0");

  if (with_series) table.columns.push_back("series_value");
  for (const char* c : {"sweep_value", "re_lambda_plus", "re_lambda_minus", "im_lambda_plus_offset",
                        "im_lambda_minus_offset", "im_lambda_plus", "im_lambda_minus", "gap_real",
                        "gap_imag", "regime", "xi_crit"}) {
    table.columns.emplace_back(c);
  }

  for (double sv : series) {
    const SystemParams base = with_series ? with_axis(cfg.params, cfg.series->axis, sv) : cfg.params;
    double xi_crit = kNaN;
    try {
      if (auto xc = critical_xi(base)) xi_crit = *xc;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ZeroDamping) throw;
    }
    for (double x : xs) {
      const SystemParams p = with_axis(base, axis, x);
      (void)validate_params(p);
      const SpectralResult s = eigenspectrum(p);
      std::vector<Cell> row;
      if (with_series) row.emplace_back(sv);
      const double half = 0.5 * p.gamma;
      row.insert(row.end(), {x, s.lambda_plus.real(), s.lambda_minus.real(), s.lambda_plus.imag() + half,
                             s.lambda_minus.imag() + half, s.lambda_plus.imag(), s.lambda_minus.imag(),
                             s.gap_real, s.gap_imag, std::string(to_string(s.regime)), xi_crit});
      table.add_row(std::move(row));
    }
  }
  return table;
}

// -------------------------------------------------------------- trajectory

namespace {

struct TrajectoryRun {
  Trajectory traj;
  std::vector<double> phase;
  std::vector<double> ratio;
  double decay = kNaN;
  bool underflow = false;
};

}  // namespace

ResultTable run_trajectory(const RunConfig& cfg) {
  ResultTable table = base_table(cfg);
  std::string axis;
  const std::vector<double> xs = sweep_points(cfg, axis);
  const bool swept = cfg.sweep.has_value();

  IntegratorSettings settings;
  settings.dt = cfg.dt;
  settings.t_end = cfg.resolved_t_end();
  settings.stop_on_unphysical = false;

  const auto runs = parallel_map<TrajectoryRun>(xs.size(), worker_count(cfg, xs.size()), [&](std::size_t i) {
    const SystemParams p = swept ? with_axis(cfg.params, axis, xs[i]) : cfg.params;
    (void)validate_params(p);
    TrajectoryRun r;
    try {
      r.traj = simulate(p, diffusion_for(p, cfg.diffusion), MomentState::displaced(cfg.alpha1, cfg.alpha2),
                        CovarianceState::vacuum(), settings);
    } catch (const Error& e) {
      throw Error(e.code(), (swept ? "sweep point " + std::to_string(i) + ": " : std::string()) + e.message());
    }
    try {
      const SyncDiagnostics d = sync_diagnostics(r.traj);
      r.phase = d.relative_phase;
      r.ratio = d.amplitude_ratio;
      r.decay = d.decay_rate_fit;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AmplitudeUnderflow) throw;
      r.underflow = true;
    }
    return r;
  });

  table.provenance.push_back("sweep_axis: " + axis);
  table.provenance.push_back("dt: " + format_double(settings.step_for(cfg.params)));
  table.provenance.push_back("t_end: " + format_double(settings.t_end));
  table.provenance.push_back("diffusion: " + std::string(to_string(cfg.diffusion)));
  table.provenance.push_back("initial_covariance: vacuum");
  table.provenance.push_back(
      "physicality: min eigenvalue of sigma + (i/2) Omega per sample; negative values are recorded, not fatal");
  table.provenance.push_back("ep_condition_threshold: " + format_double(settings.ep_condition_threshold));
  table.provenance.push_back(
      "relative_phase: unwrapped arg(<a1> conj <a2>); nan when an amplitude falls below 1e-12");
  table.provenance.push_back("decay_rate_fit: least-squares slope of ln|<a1>| over the second half");
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::string line = "run " + std::to_string(i) + ": " + axis + "=" + format_double(xs[i]) +
                       " decay_rate_fit=" + format_double(runs[i].decay) +
                       " exponential_fallback=" + (runs[i].traj.used_exponential_fallback ? "1" : "0");
    const auto& phys = runs[i].traj.physicality;
    const auto violations = std::count_if(phys.begin(), phys.end(), [](double m) { return m < -1e-10; });
    line += " unphysical_samples=" + std::to_string(violations);
    if (runs[i].underflow) line += " amplitude_underflow=1";
    table.provenance.push_back(line);
  }

  if (swept) table.columns.emplace_back("sweep_value");
  for (const char* c : {"t", "re_a1", "im_a1", "re_a2", "im_a2", "theta11", "theta22", "abs_theta12",
                        "relative_phase", "amplitude_ratio", "envelope1", "envelope2", "physicality"}) {
    table.columns.emplace_back(c);
  }
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const TrajectoryRun& r = runs[i];
    for (std::size_t k = 0; k < r.traj.covariances.size(); ++k) {
      const MomentState& m = r.traj.moments[k];
      const Mat2c N = r.traj.covariances[k].mode_block();
      std::vector<Cell> row;
      if (swept) row.emplace_back(xs[i]);
      row.insert(row.end(),
                 {m.t, m.a1().real(), m.a1().imag(), m.a2().real(), m.a2().imag(), N(0, 0).real(),
                  N(1, 1).real(), std::abs(N(0, 1)), r.underflow ? kNaN : r.phase[k],
                  r.underflow ? kNaN : r.ratio[k], std::abs(m.a1()), std::abs(m.a2()), r.traj.physicality[k]});
      table.add_row(std::move(row));
    }
  }
  return table;
}

// ------------------------------------------------------------------ steady

namespace {

struct SteadyRow {
  std::vector<Cell> cells;
};

SteadyRow steady_point(const SystemParams& p, DiffusionModel model, double sweep_value) {
  const ValidatedParams vp = validate_params(p);
  const SingularXi sx = singular_xi(p);
  const double distance = std::abs(std::abs(p.xi) - sx.xi_denominator);

  std::string status = "ok";
  std::optional<SteadyState> ss;
  std::optional<InfoReport> info;
  try {
    ss = solve_lyapunov(p, diffusion_for(p, model));
    info = info_report(ss->theta);
  } catch (const Error& e) {
    status = std::string(to_string(e.code()));
  }

  double I2 = kInf, J2 = kNaN, D2 = kNaN, D2_lower = kNaN;
  double S2A = kNaN, S2B = kNaN, S2AB = kNaN, nu1 = kNaN, nu2 = kNaN;
  double n11 = kNaN, n22 = kNaN, re12 = kNaN, im12 = kNaN, residual = kNaN;
  double J = kNaN, J_theta = kNaN, cont = kNaN, gap = kNaN;
  long long divergent = 1;
  if (ss) {
    const Mat2c N = ss->theta.mode_block();
    n11 = N(0, 0).real();
    n22 = N(1, 1).real();
    re12 = N(0, 1).real();
    im12 = N(0, 1).imag();
    residual = ss->residual;
    const FluxReport f = flux(p, *ss);
    J = f.J;
    J_theta = f.J_from_theta;
    cont = f.continuity_residual;
    gap = f.correlated_loss_gap;
  }
  if (info) {
    S2A = info->S2_A;
    S2B = info->S2_B;
    S2AB = info->S2_AB;
    nu1 = info->nu[0];
    nu2 = info->nu[1];
    J2 = info->J2;
    D2 = info->D2;
    D2_lower = info->D2_lower;
    I2 = info->I2;
    divergent = I2 > kDivergenceNats ? 1 : 0;
    if (divergent) I2 = kInf;
  }
  const long long warn = vp.has_warning(ParamWarning::DeltaSingularity) ? 1 : 0;
  return {{sweep_value, status, n11, n22, re12, im12, residual, J, J_theta, cont, gap, S2A, S2B, S2AB, I2, J2,
           D2, D2_lower, nu1, nu2, divergent, warn, sx.xi_nbar_formula, sx.xi_denominator, distance}};
}

}  // namespace

ResultTable run_steady(const RunConfig& cfg) {
  ResultTable table = base_table(cfg);
  std::string axis;
  const std::vector<double> xs = sweep_points(cfg, axis);

  const auto rows = parallel_map<SteadyRow>(xs.size(), worker_count(cfg, xs.size()), [&](std::size_t i) {
    const SystemParams p = cfg.sweep ? with_axis(cfg.params, axis, xs[i]) : cfg.params;
    return steady_point(p, cfg.diffusion, xs[i]);
  });

  table.provenance.push_back("sweep_axis: " + axis);
  table.provenance.push_back("diffusion: " + std::string(to_string(cfg.diffusion)));
  table.provenance.push_back("divergence_threshold_nats: " + format_double(kDivergenceNats));
  table.provenance.push_back("flagged rows: status != ok or divergent = 1; I2 = inf on such rows");
  table.provenance.push_back("mode block: n_ij = <a_i^dag a_j> + delta_ij/2");
  const SingularXi sx = singular_xi(cfg.params);
  const double located = divergence_xi(cfg.params);
  const double d_nbar = std::abs(located - sx.xi_nbar_formula);
  const double d_denom = std::abs(located - sx.xi_denominator);
  table.provenance.push_back("singular_xi_formula_nbar: " + format_double(sx.xi_nbar_formula));
  table.provenance.push_back("singular_xi_gamma_over_gamma12: " + format_double(sx.xi_denominator));
  table.provenance.push_back("divergence_xi_located: " + format_double(located));
  // Matching within 1e-3 absorbs the gap left by the near-singular guard.
  const bool by_nbar = d_nbar < 1e-3;
  const bool by_denom = d_denom < 1e-3;
  table.provenance.push_back(std::string("divergence_matches: ") +
                             (std::isinf(located)     ? "none (solvable on [0, 1])"
                              : by_nbar && by_denom   ? "both"
                              : by_denom              ? "gamma_over_gamma12"
                              : by_nbar               ? "formula_nbar"
                                                      : "neither"));

  for (const char* c : {"sweep_value", "status", "n11", "n22", "re_n12", "im_n12", "residual", "J",
                        "J_from_theta", "continuity_residual", "correlated_loss_term", "S2_A", "S2_B",
                        "S2_AB", "I2", "J2", "D2", "D2_lower", "nu1", "nu2", "divergent",
                        "delta_singularity_warning", "xi_singular_formula_nbar", "xi_singular_gamma_ratio",
                        "distance_to_singular_xi"}) {
    table.columns.emplace_back(c);
  }
  for (const auto& r : rows) table.add_row(r.cells);
  return table;
}

// ---------------------------------------------------------------- validate

namespace {

struct Check {
  std::string name;
  double measured;
  double threshold;
  std::string rule;  ///< "<=" or ">="
};

bool passes(const Check& c) {
  if (std::isnan(c.measured)) return false;
  return c.rule == "<=" ? c.measured <= c.threshold : c.measured >= c.threshold;
}

// Stable draw: xi limited so that every mode decays.
SystemParams stable_params(corpus::Rng& rng) {
  SystemParams p = corpus::random_params(rng);
  p.gamma = corpus::uniform(rng, 0.05, 1.0);
  const double limit = 0.9 * p.gamma / gamma12(p);
  p.xi = corpus::uniform(rng, -std::min(1.0, limit), std::min(1.0, limit));
  return p;
}

double eigen_error(const SystemParams& p) {
  const SpectralResult s = eigenspectrum(p);
  Eigen::ComplexEigenSolver<Mat2c> es(build_dynamical_matrix(p).M);
  const auto& ev = es.eigenvalues();
  const double direct = std::max(std::abs(s.lambda_plus - ev(0)), std::abs(s.lambda_minus - ev(1)));
  const double swapped = std::max(std::abs(s.lambda_plus - ev(1)), std::abs(s.lambda_minus - ev(0)));
  return std::min(direct, swapped);
}

// -inf when the covariance is not even positive definite.
double min_nu_margin(const CovarianceState& c) {
  try {
    return symplectic_eigenvalues(ladder_to_quadrature(c))[1] - 0.5;
  } catch (const Error&) {
    return -kInf;
  }
}

// Exhaustive 400 x 180 grid over ln s in [-20, 19.9] and phi in [0, pi).
double grid_J2(const QuadratureCovariance& q) {
  double best = -kInf;
  for (int k = 0; k < 400; ++k) {
    const double s = std::exp(-20.0 + 0.1 * k);
    for (int j = 0; j < 180; ++j) {
      best = std::max(best, conditional_information(q, s, j * std::numbers::pi / 180.0));
    }
  }
  return best;
}

}  // namespace

ResultTable run_validate(const RunConfig& cfg, bool& all_passed) {
  ResultTable table = base_table(cfg);
  const int n = cfg.corpus_size;
  std::vector<Check> checks;

  {
    corpus::Rng rng(cfg.seed);
    double eig = 0.0, w = 0.0, diag = 0.0, normal = 0.0, sym = 0.0;
    for (int i = 0; i < n; ++i) {
      const SystemParams p = corpus::random_params(rng);
      eig = std::max(eig, eigen_error(p));
      const AssembledGenerator a = build_lindblad_ops(p).assemble(p);
      const Mat4c W = build_dynamical_matrix(p).W;
      const Mat4 D = build_diffusion_matrix(p).D;
      w = std::max(w, (a.W - W).cwiseAbs().maxCoeff());
      for (int k = 0; k < 4; ++k) {
        diag = std::max(diag, std::abs(a.diffusion_symmetrized(k, k) - D(k, k)));
      }
      const double cross = D(kA1, kA2);
      const double offset = 0.5 * p.xi * gamma12(p);
      for (auto [r, c] : {std::pair{kA1, kA2}, std::pair{kA2, kA1}, std::pair{kA1dag, kA2dag},
                          std::pair{kA2dag, kA1dag}}) {
        normal = std::max(normal, std::abs(a.diffusion_normal_ordered(r, c) - cross));
        sym = std::max(sym, std::abs(a.diffusion_symmetrized(r, c) - cross - offset));
      }
    }
    checks.push_back({"eigenvalue_closed_form_vs_eigensolver", eig, 1e-10, "<="});
    checks.push_back({"dissipator_roundtrip_drift", w, 1e-12, "<="});
    checks.push_back({"dissipator_roundtrip_diffusion_diagonal", diag, 1e-12, "<="});
    checks.push_back({"dissipator_roundtrip_normal_ordered_cross", normal, 1e-12, "<="});
    checks.push_back({"dissipator_symmetrized_cross_offset", sym, 1e-12, "<="});
  }

  {
    corpus::Rng rng(cfg.seed + 1);
    double closed = 0.0, resid = 0.0, flux_err = 0.0, cont = 0.0;
    double margin = kInf;
    for (int i = 0; i < n; ++i) {
      const SystemParams p = corpus::random_resonant_params(rng);
      // The closed form is a statement about the printed diffusion matrix.
      const SteadyState printed = solve_lyapunov(p);
      const SteadyState cf = closed_form_steady(p);
      const double scale = std::max(1.0, printed.theta.theta.cwiseAbs().maxCoeff());
      closed = std::max(closed, (printed.theta.theta - cf.theta.theta).cwiseAbs().maxCoeff() / scale);

      DiffusionMatrix D = diffusion_for(p, cfg.diffusion);
      if (cfg.flip_diffusion_sign) D.D = -D.D;
      const SteadyState num = solve_lyapunov(p, D);
      resid = std::max(resid, num.residual / D.D.norm());
      margin = std::min(margin, min_nu_margin(num.theta));
      const FluxReport f = flux(p, num);
      flux_err = std::max(flux_err, std::abs(f.J - f.J_from_theta));
      cont = std::max(cont, f.continuity_residual);
    }
    checks.push_back({"steady_closed_form_vs_numeric_relative", closed, 1e-9, "<="});
    checks.push_back({"steady_relative_residual", resid, 1e-10, "<="});
    checks.push_back({"steady_physicality_min_nu_minus_half", margin, -1e-10, ">="});
    checks.push_back({"flux_closed_form_vs_covariance", flux_err, 1e-10, "<="});
    checks.push_back({"population_continuity_residual", cont, 1e-10, "<="});
  }

  {
    corpus::Rng rng(cfg.seed + 2);
    double margin = kInf;
    for (int i = 0; i < 5; ++i) {
      const SystemParams p = stable_params(rng);
      try {
        const Trajectory t = propagate_covariance(p, diffusion_for(p, cfg.diffusion), CovarianceState::vacuum(),
                                                  20.0 * 2.0 * std::numbers::pi / p.omega1,
                                                  IntegratorSettings{}.step_for(p));
        for (const auto& c : t.covariances) margin = std::min(margin, min_nu_margin(c));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::PhysicalityLost) throw;
        margin = -kInf;
      }
    }
    checks.push_back({"trajectory_physicality_min_nu_minus_half", margin, -1e-10, ">="});
  }

  {
    corpus::Rng rng(cfg.seed + 3);
    double neg = kInf, over = -kInf, lower = -kInf, opt_gap = kInf;
    double invariance = 0.0;
    for (int i = 0; i < 50; ++i) {
      const QuadratureCovariance q = corpus::random_physical_state(rng);
      const ClassicalCorrelations cc = classical_correlations(q);
      const double I2 = mutual_information(q);
      const double D2 = gaussian_discord(q);
      neg = std::min(neg, D2);
      over = std::max(over, D2 - I2);
      lower = std::max(lower, discord_lower_bound(quadrature_to_ladder(q)) - D2);
      if (i < 20) opt_gap = std::min(opt_gap, cc.J2 - grid_J2(q));

      const Mat4 S = corpus::random_symplectic(rng);
      QuadratureCovariance moved;
      moved.sigma = S * q.sigma * S.transpose();
      const auto a = symplectic_eigenvalues(q);
      const auto b = symplectic_eigenvalues(moved);
      invariance = std::max({invariance, std::abs(a[0] - b[0]) / a[0], std::abs(a[1] - b[1]) / a[1]});
    }
    checks.push_back({"discord_nonnegative_min", neg, -1e-9, ">="});
    checks.push_back({"discord_minus_mutual_information_max", over, 1e-9, "<="});
    checks.push_back({"discord_lower_bound_excess_max", lower, 1e-9, "<="});
    checks.push_back({"optimizer_minus_grid_min", opt_gap, -1e-6, ">="});
    checks.push_back({"symplectic_eigenvalue_invariance", invariance, 1e-10, "<="});
  }

  table.provenance.push_back("corpus_size: " + std::to_string(n));
  table.provenance.push_back("seed: " + std::to_string(cfg.seed));
  table.provenance.push_back("diffusion: " + std::string(to_string(cfg.diffusion)));
  table.provenance.push_back(std::string("flip_diffusion_sign: ") + (cfg.flip_diffusion_sign ? "1" : "0"));
  table.columns = {"check", "measured", "threshold", "rule", "pass"};
  all_passed = true;
  for (const auto& c : checks) {
    const bool ok = passes(c);
    all_passed = all_passed && ok;
    table.add_row({c.name, c.measured, c.threshold, c.rule, std::string(ok ? "pass" : "fail")});
  }
  return table;
}

// ------------------------------------------------------------- entry point

namespace {

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path out(path);
  if (out.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
      out = std::filesystem::path(dir) / out;
    }
  }
  return out;
}

void emit(const RunConfig& cfg, const ResultTable& table) {
  std::ostringstream buf;
  if (cfg.format == Format::Csv) {
    write_csv(buf, table);
  } else {
    write_json(buf, table);
  }
  if (cfg.output_path.empty()) {
    std::cout << buf.str();
    return;
  }
  const auto path = resolve_output(cfg.output_path);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::Config, "cannot open output file " + path.string());
  os << buf.str();
}

}  // namespace

int main_entry(int argc, char** argv) {
  CLI::App app{"Gaussian simulator for two coupled oscillators in a correlated bath"};
  app.set_version_flag("--version", kVersion);
  std::string sub;
  std::string config_path;
  std::vector<std::string> sets;
  std::string output;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  app.add_option("subcommand", sub, "spectrum | trajectory | steady | validate")->required();
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--set", sets, "override, e.g. params.xi=0.5 (repeatable)");
  app.add_option("--output", output, "output file (default stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", seed, "seed of the validation corpus");
  app.add_option("--threads", threads, "worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunConfig cfg;
  try {
    cfg.subcommand = parse_subcommand(sub);
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw Error(ErrorCode::Config, "cannot read config file " + config_path);
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(is);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Config, std::string("config is not valid JSON: ") + e.what());
      }
      try {
        apply_json(cfg, doc);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Config, std::string("config has a wrongly typed value: ") + e.what());
      }
      // The command line names the workload.
      cfg.subcommand = parse_subcommand(sub);
    }
    for (const auto& s : sets) apply_override(cfg, s);
    if (!output.empty()) cfg.output_path = output;
    if (!format.empty()) cfg.format = format == "csv" ? Format::Csv : Format::Json;
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    check(cfg);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    bool ok = true;
    ResultTable table;
    switch (cfg.subcommand) {
      case Subcommand::Spectrum: table = run_spectrum(cfg); break;
      case Subcommand::Trajectory: table = run_trajectory(cfg); break;
      case Subcommand::Steady: table = run_steady(cfg); break;
      case Subcommand::Validate: table = run_validate(cfg, ok); break;
    }
    emit(cfg, table);
    if (!ok) {
      std::cerr << "validation failed\n";
      return 4;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config || e.code() == ErrorCode::OutOfRange || e.code() == ErrorCode::NonFinite) {
      std::cerr << "config error: " << e.what() << '\n';
      return 2;
    }
    std::cerr << "solver error (" << to_string(e.code()) << "): " << e.message() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace corrsync::cli
