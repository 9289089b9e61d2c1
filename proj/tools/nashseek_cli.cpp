#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "nashseek/artifacts.hpp"
#include "nashseek/errors.hpp"

namespace {

using namespace nashseek;

void report_config_error(const ConfigError& e) {
  std::cerr << "config error: " << e.what() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed Nash equilibrium seeking simulator"};
  app.require_subcommand(1);

  std::string source;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  std::optional<double> tolerance;
  int retries = 0;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string parameter;
  std::vector<std::string> values;

  auto* run = app.add_subcommand("run", "Simulate a scenario and write trajectory.csv and summary.json");
  run->add_option("config", source, "Config file path or builtin:<name>")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--set", overrides, "Override a config value, key=value (repeatable)");
  run->add_option("--tolerance", tolerance, "Convergence tolerance on final_error");
  run->add_option("--retries", retries, "On divergence, halve h (and double the stride) up to this many times")
      ->check(CLI::NonNegativeNumber);

  auto* sw = app.add_subcommand("sweep", "Run one scenario over several values of a numeric parameter");
  sw->add_option("config", source, "Config file path or builtin:<name>")->required();
  sw->add_option("parameter", parameter, "Dotted config path, e.g. estimator.delta")->required();
  sw->add_option("values", values, "Values to substitute");
  sw->add_option("--out", out_dir, "Output directory")->capture_default_str();
  sw->add_option("--set", overrides, "Override a config value, key=value (repeatable)");
  sw->add_option("--tolerance", tolerance, "Convergence tolerance on final_error");
  sw->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("list-builtins", "Print the builtin scenario names");

  auto* val = app.add_subcommand("validate", "Parse and validate a config without running it");
  val->add_option("config", source, "Config file path or builtin:<name>")->required();
  val->add_option("--set", overrides, "Override a config value, key=value (repeatable)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& name : builtin_names()) std::cout << name << '\n';
      return kExitConverged;
    }
    if (val->parsed()) {
      const ScenarioConfig cfg = load_config(source, overrides);
      std::cout << cfg.scenario.name << ": ok (" << cfg.scenario.game.n_players() << " players, hash "
                << cfg.scenario.config_hash << ")\n";
      return kExitConverged;
    }
    if (run->parsed()) {
      ScenarioConfig cfg = load_config(source, overrides);
      if (tolerance) cfg.tolerance = *tolerance;
      RunResult r = run_to_directory(cfg, out_dir);
      for (int attempt = 0; attempt < retries && r.log.diverged; ++attempt) {
        nlohmann::json doc = cfg.document;
        const auto& integ = cfg.scenario.integration;
        doc["integration"]["h"] = integ.h / 2;
        doc["integration"]["stride"] = integ.stride * 2;
        std::cerr << "diverged at t=" << r.log.divergence_time << " with h=" << integ.h << ", retrying with h="
                  << integ.h / 2 << '\n';
        const double tol = cfg.tolerance;
        cfg = parse_config(doc);
        cfg.tolerance = tol;
        r = run_to_directory(cfg, out_dir);
      }
      if (r.log.diverged) {
        std::cerr << "diverged at t=" << r.log.divergence_time << " in " << r.log.divergence_slice << ": "
                  << r.log.divergence_message << '\n';
      } else {
        std::cout << cfg.scenario.name << ": final_error=" << format_number(r.summary->final_error)
                  << " max|k|=" << format_number(r.summary->max_abs_k)
                  << (r.converged ? " converged" : " above tolerance") << '\n';
      }
      return r.exit_code;
    }
    if (sw->parsed()) {
      nlohmann::json doc = load_document(source);
      for (const auto& o : overrides) apply_override(doc, o);
      const auto rows = sweep(doc, parameter, values, out_dir, jobs, tolerance);
      write_sweep_csv(parameter, rows, std::cout);
      for (const auto& r : rows) {
        if (!r.error.empty()) return kExitConfigError;
      }
      return kExitConverged;
    }
  } catch (const ConfigError& e) {
    report_config_error(e);
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitConfigError;
}
