#pragma once

#include "corrsync/cli/config.hpp"
#include "corrsync/cli/table.hpp"

namespace corrsync::cli {

inline constexpr const char* kVersion = "1.0.0";

/// I2 values above this are reported as +inf and flagged divergent.
inline constexpr double kDivergenceNats = 50.0;

ResultTable run_spectrum(const RunConfig& cfg);
ResultTable run_trajectory(const RunConfig& cfg);
ResultTable run_steady(const RunConfig& cfg);

/// One row per named check; `all_passed` is set accordingly.
ResultTable run_validate(const RunConfig& cfg, bool& all_passed);

/// Full command-line entry point; returns the process exit status
/// (0 ok, 2 config error, 3 solver error, 4 validation failure).
int main_entry(int argc, char** argv);

}  // namespace corrsync::cli
