#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "corrsync/model.hpp"
#include "corrsync/state.hpp"

namespace corrsync::cli {

enum class Subcommand { Spectrum, Trajectory, Steady, Validate };
enum class Format { Csv, Json };

struct Sweep {
  std::string axis = "xi";  ///< one of xi, g, gamma, nbar2, delta
  double start = -1.0;
  double stop = 1.0;
  int count = 201;

  std::vector<double> values() const;
};

/// Extra curve family for the spectrum subcommand (e.g. several g values).
struct Series {
  std::string axis = "g";
  std::vector<double> values;
};

struct RunConfig {
  Subcommand subcommand = Subcommand::Steady;
  SystemParams params;
  DiffusionModel diffusion = DiffusionModel::Printed;
  std::optional<Sweep> sweep;
  std::optional<Series> series;
  double dt = 0.0;      ///< 0 selects (2 pi / omega1) / 200
  std::optional<double> t_end;  ///< unset selects 100 periods of omega1
  cplx alpha1{1.0, 0.0};
  cplx alpha2{0.5, 0.0};
  std::string output_path;  ///< empty writes to stdout
  Format format = Format::Csv;
  std::uint64_t seed = 20240917;
  int corpus_size = 1000;
  bool flip_diffusion_sign = false;  ///< debug mutation for validate
  int threads = 0;                   ///< 0 selects hardware concurrency

  double resolved_t_end() const;

  nlohmann::json to_json() const;
};

std::string_view to_string(Subcommand s);
Subcommand parse_subcommand(const std::string& s);

/// Applies a parsed JSON document on top of `cfg`. Unknown keys are errors.
void apply_json(RunConfig& cfg, const nlohmann::json& doc);

/// Applies one `--set dotted.key=value` override.
void apply_override(RunConfig& cfg, const std::string& assignment);

/// Checks cross-field invariants (sweep count >= 2, start != stop, params).
void check(const RunConfig& cfg);

/// Applies a sweep or series axis value to a copy of `p`.
SystemParams with_axis(const SystemParams& p, const std::string& axis, double value);

}  // namespace corrsync::cli
