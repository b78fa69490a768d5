#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "corrsync/cli/config.hpp"
#include "corrsync/cli/runners.hpp"

using namespace corrsync;
using namespace corrsync::cli;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int status = 0;
  std::string out;
};

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "corrsync_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

RunResult run_tool(const std::string& args, const std::string& env = "") {
  const fs::path out = scratch() / "stdout.txt";
  const std::string cmd =
      env + " \"" CORRSYNC_TOOL_PATH "\" " + args + " > \"" + out.string() + "\" 2> \"" + (scratch() / "stderr.txt").string() + "\"";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out);
  return r;
}

RunConfig config_with(std::initializer_list<const char*> overrides) {
  RunConfig cfg;
  for (const char* o : overrides) apply_override(cfg, o);
  check(cfg);
  return cfg;
}

int column(const ResultTable& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (t.columns[i] == name) return static_cast<int>(i);
  }
  ADD_FAILURE() << "no column " << name;
  return 0;
}

double num(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<long long>(&c)) return static_cast<double>(*i);
  ADD_FAILURE() << "cell is not numeric";
  return 0.0;
}

ErrorCode config_code(std::initializer_list<const char*> overrides) {
  try {
    (void)config_with(overrides);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected a config error";
  return ErrorCode::OutOfRange;
}

}  // namespace

TEST(Config, OverridesAndRoundTrip) {
  const RunConfig cfg = config_with({"params.xi=0.25", "sweep.axis=g", "sweep.count=5", "model.diffusion=lindblad",
                                     "integrator.t_end=3"});
  EXPECT_EQ(cfg.params.xi, 0.25);
  ASSERT_TRUE(cfg.sweep.has_value());
  EXPECT_EQ(cfg.sweep->axis, "g");
  EXPECT_EQ(cfg.sweep->values().size(), 5u);
  EXPECT_EQ(cfg.diffusion, DiffusionModel::Lindblad);
  EXPECT_EQ(cfg.resolved_t_end(), 3.0);

  RunConfig again;
  apply_json(again, cfg.to_json());
  EXPECT_EQ(again.to_json().dump(), cfg.to_json().dump());
}

TEST(Config, DefaultTimeIsHundredPeriods) {
  const RunConfig cfg = config_with({"params.omega1=2"});
  EXPECT_NEAR(cfg.resolved_t_end(), 100.0 * M_PI, 1e-12);
}

TEST(Config, Errors) {
  EXPECT_EQ(config_code({"nonsense=1"}), ErrorCode::Config);
  EXPECT_EQ(config_code({"params.kappa=1"}), ErrorCode::Config);
  EXPECT_EQ(config_code({"sweep.count=1"}), ErrorCode::Config);
  EXPECT_EQ(config_code({"sweep.start=0.3", "sweep.stop=0.3"}), ErrorCode::Config);
  EXPECT_EQ(config_code({"sweep.axis=omega"}), ErrorCode::Config);
  EXPECT_EQ(config_code({"model.diffusion=other"}), ErrorCode::Config);
  EXPECT_EQ(config_code({"output.format=xml"}), ErrorCode::Config);
  EXPECT_EQ(config_code({"missing_equals"}), ErrorCode::Config);
  EXPECT_THROW((void)config_with({"params.gamma=-1"}), Error);
}

TEST(Spectrum, ZeroDetuningIsSynchronized) {
  const ResultTable t = run_spectrum(config_with({"subcommand=spectrum", "params.g=0", "params.gamma=0.5", "sweep.count=11"}));
  ASSERT_EQ(t.rows.size(), 11u);
  const int regime = column(t, "regime");
  const int sweep = column(t, "sweep_value");
  for (const auto& row : t.rows) {
    if (num(row[sweep]) != 0.0) EXPECT_EQ(std::get<std::string>(row[regime]), "synchronized");
  }
}

TEST(Trajectory, ZeroDurationGivesInitialRow) {
  const ResultTable t = run_trajectory(config_with({"subcommand=trajectory", "params.g=0.1", "params.gamma=0.1",
                                                    "integrator.t_end=0", "initial.alpha1=[0.3, -0.2]"}));
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(num(t.rows[0][column(t, "t")]), 0.0);
  EXPECT_EQ(num(t.rows[0][column(t, "re_a1")]), 0.3);
  EXPECT_EQ(num(t.rows[0][column(t, "im_a1")]), -0.2);
  EXPECT_EQ(num(t.rows[0][column(t, "theta11")]), 0.5);
}

TEST(Steady, ProductStateRow) {
  const ResultTable t = run_steady(config_with({"params.g=0", "params.xi=0", "params.gamma=0.2", "params.nbar2=1"}));
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(std::get<std::string>(t.rows[0][column(t, "status")]), "ok");
  EXPECT_NEAR(num(t.rows[0][column(t, "I2")]), 0.0, 1e-14);
  EXPECT_NEAR(num(t.rows[0][column(t, "D2")]), 0.0, 1e-14);
}

TEST(Steady, EqualBathsFlaggedDivergentAtUnitCorrelation) {
  const ResultTable t = run_steady(config_with({"params.g=1", "params.gamma=0.1", "params.nbar1=0.5", "params.nbar2=0.5",
                                                "sweep.start=0", "sweep.stop=1", "sweep.count=11"}));
  const int i2 = column(t, "I2");
  const int div = column(t, "divergent");
  for (std::size_t k = 0; k + 1 < t.rows.size(); ++k) {
    EXPECT_TRUE(std::isfinite(num(t.rows[k][i2])));
    EXPECT_EQ(num(t.rows[k][div]), 0.0);
  }
  EXPECT_TRUE(std::isinf(num(t.rows.back()[i2])));
  EXPECT_EQ(num(t.rows.back()[div]), 1.0);
}

TEST(Validate, DiffusionChoiceAndMutation) {
  bool ok = false;
  (void)run_validate(config_with({"subcommand=validate", "validate.corpus_size=200", "model.diffusion=lindblad"}), ok);
  EXPECT_TRUE(ok);

  bool flipped_ok = true;
  const ResultTable t = run_validate(config_with({"subcommand=validate", "validate.corpus_size=200",
                                                  "model.diffusion=lindblad", "debug.flip_diffusion_sign=true"}),
                                     flipped_ok);
  EXPECT_FALSE(flipped_ok);
  const int name = column(t, "check");
  const int pass = column(t, "pass");
  bool saw_physicality = false;
  for (const auto& row : t.rows) {
    if (std::get<std::string>(row[name]).rfind("steady_physicality", 0) == 0) {
      saw_physicality = true;
      EXPECT_EQ(std::get<std::string>(row[pass]), "fail");
    }
  }
  EXPECT_TRUE(saw_physicality);
}

TEST(Tool, ExitCodes) {
  EXPECT_EQ(run_tool("steady --set params.g=0.1 --set params.gamma=0.1").status, 0);
  EXPECT_EQ(run_tool("steady --set bogus=1").status, 2);
  EXPECT_EQ(run_tool("steady --set sweep.count=1").status, 2);
  EXPECT_EQ(run_tool("steady --config /nonexistent/file.json").status, 2);
  EXPECT_EQ(run_tool("frobnicate").status, 2);
  EXPECT_EQ(run_tool("trajectory --set params.gamma=0.1 --set integrator.dt=3").status, 3);
  EXPECT_EQ(run_tool("validate --set validate.corpus_size=100 --set debug.flip_diffusion_sign=true").status, 4);
  EXPECT_EQ(run_tool("validate --set validate.corpus_size=100 --set model.diffusion=lindblad").status, 0);
}

TEST(Tool, DeterministicOutput) {
  const std::string args = "validate --set validate.corpus_size=100 --set model.diffusion=lindblad --seed 7";
  const RunResult a = run_tool(args);
  const RunResult b = run_tool(args + " --threads 1");
  EXPECT_FALSE(a.out.empty());
  EXPECT_EQ(a.out, b.out);

  const std::string traj = "trajectory --set params.g=0.1 --set params.gamma=0.1 "
                           "--set sweep.axis=xi --set sweep.start=-1 --set sweep.stop=1 --set sweep.count=3 "
                           "--set integrator.t_end=20";
  EXPECT_EQ(run_tool(traj).out, run_tool(traj).out);
}

TEST(Tool, JsonFormatAndOutputDirectory) {
  const fs::path dir = scratch() / "outdir";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const RunResult r = run_tool("steady --set params.g=0.1 --set params.gamma=0.1 --format json --output steady.json",
                               "CORRSYNC_OUTPUT_DIR=\"" + dir.string() + "\"");
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(r.out.empty());
  const std::string body = slurp(dir / "steady.json");
  const auto doc = nlohmann::json::parse(body);
  EXPECT_TRUE(doc.contains("columns"));
  EXPECT_TRUE(doc.contains("rows"));
  EXPECT_EQ(doc["rows"].size(), 1u);
}
