#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nashseek/scenario.hpp"

namespace nashseek {

enum ExitCode : int {
  kExitConverged = 0,
  kExitConfigError = 1,
  kExitDiverged = 2,
  kExitNotConverged = 3,  // finished cleanly but final_error >= tolerance
};

// Header of trajectory.csv; depends only on the scenario structure.
std::vector<std::string> trajectory_columns(const Scenario& scenario);

void write_trajectory_csv(const Scenario& scenario, const RunLog& log, std::ostream& out);

struct RunResult {
  RunLog log;
  std::optional<Summary> summary;  // absent when the run diverged
  Vec x_star;
  bool converged = false;
  int exit_code = kExitConverged;
};

// Integrates and scores against the game's equilibrium. Does not touch disk.
RunResult execute(const ScenarioConfig& config);

nlohmann::json summary_json(const ScenarioConfig& config, const RunResult& result);

// execute() plus <out>/trajectory.csv and <out>/summary.json.
RunResult run_to_directory(const ScenarioConfig& config, const std::filesystem::path& out);

struct SweepRow {
  std::string value;
  double final_error = 0.0;
  double max_abs_k = 0.0;
  bool diverged = false;
  bool converged = false;
  std::string error;  // config error text, if the override was rejected
};

// Runs `parameter=value` for each value on up to `jobs` threads. Each run
// writes summary.json into <out>/run_<index>; the table goes to <out>/sweep.csv.
// Throws ConfigError when `values` is empty.
std::vector<SweepRow> sweep(const nlohmann::json& document, const std::string& parameter,
                            const std::vector<std::string>& values, const std::filesystem::path& out,
                            int jobs, std::optional<double> tolerance = std::nullopt);

void write_sweep_csv(const std::string& parameter, const std::vector<SweepRow>& rows, std::ostream& out);

// Shortest round-trip decimal form.
std::string format_number(double value);

}  // namespace nashseek
