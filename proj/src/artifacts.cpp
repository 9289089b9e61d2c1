#include "nashseek/artifacts.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <mutex>
#include <thread>

#include "nashseek/errors.hpp"

namespace nashseek {

using nlohmann::json;

namespace {

std::string channel(const std::string& prefix, int i, int c) {
  return prefix + "_" + std::to_string(i + 1) + "_" + std::to_string(c + 1);
}

json stat_list(const std::vector<NamedStat>& stats) {
  json out = json::array();
  for (const NamedStat& s : stats) {
    out.push_back({{"name", s.name}, {"max_abs", s.max_abs}, {"plateau", s.plateau}, {"final", s.final_value}});
  }
  return out;
}

json pair_map(const std::vector<std::pair<std::string, double>>& items) {
  json out = json::object();
  for (const auto& [name, value] : items) out[name] = value;
  return out;
}

// Non-finite numbers have no JSON form; write them as null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::vector<std::string> trajectory_columns(const Scenario& scenario) {
  const StateLayout layout(scenario);
  const auto& players = layout.players();
  const int n = scenario.game.n_players();
  const bool with_plants = !scenario.players.empty();
  std::vector<std::string> cols{"t"};

  auto per_player = [&](const std::string& prefix, auto has) {
    for (int i = 0; i < n; ++i) {
      if (!has(i)) continue;
      for (int c = 0; c < scenario.game.action_dims[i]; ++c) cols.push_back(channel(prefix, i, c));
    }
  };
  auto always = [](int) { return true; };

  if (with_plants) per_player("x", always);
  per_player("y", always);
  if (with_plants) {
    per_player("k", [&](int i) { return players[i].k >= 0; });
    per_player("theta_hat", [&](int i) { return players[i].theta_hat >= 0; });
    per_player("k2", [&](int i) { return players[i].k2 >= 0; });
    per_player("theta_bar1", [&](int i) { return players[i].theta_bar1 >= 0; });
    per_player("theta_bar2", [&](int i) { return players[i].theta_bar2 >= 0; });
    per_player("b_bar1", [&](int i) { return players[i].b_bar1 >= 0; });
    per_player("v", [&](int i) { return players[i].v >= 0; });
  }
  if (const auto* adaptive = std::get_if<AdaptiveGains>(&scenario.estimator)) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::string base = "delta_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
        if (adaptive->indexing == GainIndexing::PerChannel) {
          cols.push_back(base);
        } else {
          for (int c = 0; c < scenario.game.action_dims[j]; ++c) cols.push_back(base + "_" + std::to_string(c + 1));
        }
      }
    }
  }
  if (with_plants) per_player("u", always);
  return cols;
}

void write_trajectory_csv(const Scenario& scenario, const RunLog& log, std::ostream& out) {
  const StateLayout layout(scenario);
  const auto& players = layout.players();
  const int n = scenario.game.n_players();
  const bool with_plants = !scenario.players.empty();

  // State indices in the same order as trajectory_columns().
  std::vector<int> idx;
  auto block = [&](auto offset_of) {
    for (int i = 0; i < n; ++i) {
      const int off = offset_of(i);
      if (off < 0) continue;
      for (int c = 0; c < scenario.game.action_dims[i]; ++c) idx.push_back(off + c);
    }
  };
  if (with_plants) block([&](int i) { return players[i].x; });
  block([&](int i) { return layout.y_offset() + scenario.game.offset(i); });
  if (with_plants) {
    block([&](int i) { return players[i].k; });
    block([&](int i) { return players[i].theta_hat; });
    block([&](int i) { return players[i].k2; });
    block([&](int i) { return players[i].theta_bar1; });
    block([&](int i) { return players[i].theta_bar2; });
    block([&](int i) { return players[i].b_bar1; });
    block([&](int i) { return players[i].v; });
  }
  for (int g = 0; g < layout.delta_size(); ++g) idx.push_back(layout.delta_offset() + g);

  const auto cols = trajectory_columns(scenario);
  for (size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n';
  for (int r = 0; r < log.sample_count(); ++r) {
    out << format_number(log.times[r]);
    for (int k : idx) out << ',' << format_number(log.states(r, k));
    if (with_plants) {
      for (Eigen::Index c = 0; c < log.controls.cols(); ++c) out << ',' << format_number(log.controls(r, c));
    }
    out << '\n';
  }
}

RunResult execute(const ScenarioConfig& config) {
  RunResult result;
  const Scenario& s = config.scenario;
  result.x_star = s.game.analytic_ne ? *s.game.analytic_ne : solve_nash(s.game);
  result.log = integrate(s);
  if (result.log.diverged) {
    result.exit_code = kExitDiverged;
    return result;
  }
  result.summary = metrics(result.log, result.x_star);
  result.converged = result.summary->all_finite && result.summary->final_error < config.tolerance;
  result.exit_code = result.converged ? kExitConverged : kExitNotConverged;
  return result;
}

json summary_json(const ScenarioConfig& config, const RunResult& result) {
  const RunLog& log = result.log;
  json out;
  out["scenario"] = log.scenario_name;
  out["config_hash"] = log.config_hash;
  out["converged"] = result.converged;
  out["diverged"] = log.diverged;
  out["tolerance"] = config.tolerance;
  out["samples"] = log.sample_count();
  out["x_star"] = std::vector<double>(result.x_star.data(), result.x_star.data() + result.x_star.size());
  if (log.diverged) {
    out["divergence"] = {{"message", log.divergence_message},
                         {"time", log.divergence_time},
                         {"slice", log.divergence_slice}};
  }
  if (result.summary) {
    const Summary& m = *result.summary;
    out["metrics"] = {
        {"final_error", finite_or_null(m.final_error)},
        {"final_y_error", finite_or_null(m.final_y_error)},
        {"max_abs_k", m.max_abs_k},
        {"max_abs_adaptive", m.max_abs_adaptive},
        {"max_plateau", m.max_plateau},
        {"max_terminal_gain_rate", m.max_terminal_gain_rate},
        {"max_abs_velocity", m.max_abs_velocity},
        {"max_final_velocity", m.max_final_velocity},
        {"y_dot_sq_integral", m.y_dot_sq_integral},
        {"y_dot_sq_tail_fraction", m.y_dot_sq_tail_fraction},
        {"min_gain_increment", m.min_gain_increment},
        {"all_finite", m.all_finite},
        {"adaptive", stat_list(m.adaptive)},
        {"gains", stat_list(m.gains)},
        {"velocities", stat_list(m.velocities)},
        {"terminal_gain_rate", pair_map(m.terminal_gain_rate)},
        {"max_abs_u", pair_map(m.max_abs_u)},
    };
  }
  out["config"] = redact_hidden(config.document);
  return out;
}

RunResult run_to_directory(const ScenarioConfig& config, const std::filesystem::path& out) {
  RunResult result = execute(config);
  std::filesystem::create_directories(out);
  {
    std::ofstream csv(out / "trajectory.csv", std::ios::binary);
    write_trajectory_csv(config.scenario, result.log, csv);
  }
  std::ofstream js(out / "summary.json", std::ios::binary);
  js << summary_json(config, result).dump(2) << '\n';
  return result;
}

std::vector<SweepRow> sweep(const json& document, const std::string& parameter,
                            const std::vector<std::string>& values, const std::filesystem::path& out, int jobs,
                            std::optional<double> tolerance) {
  if (values.empty()) throw ConfigError(parameter, "sweep needs at least one value");
  if (parameter.empty()) throw ConfigError("parameter", "sweep needs a parameter path");
  std::vector<SweepRow> rows(values.size());
  std::atomic<size_t> next{0};
  std::filesystem::create_directories(out);

  auto worker = [&] {
    for (size_t k = next++; k < values.size(); k = next++) {
      SweepRow& row = rows[k];
      row.value = values[k];
      try {
        json doc = document;
        apply_override(doc, parameter + "=" + values[k]);
        ScenarioConfig cfg = parse_config(doc);
        if (tolerance) cfg.tolerance = *tolerance;
        const RunResult r = execute(cfg);
        row.diverged = r.log.diverged;
        row.converged = r.converged;
        if (r.summary) {
          row.final_error = r.summary->final_error;
          row.max_abs_k = r.summary->max_abs_k;
        } else {
          row.final_error = std::numeric_limits<double>::infinity();
        }
        const auto dir = out / ("run_" + std::to_string(k));
        std::filesystem::create_directories(dir);
        std::ofstream js(dir / "summary.json", std::ios::binary);
        js << summary_json(cfg, r).dump(2) << '\n';
      } catch (const ConfigError& e) {
        row.error = e.what();
        row.final_error = std::numeric_limits<double>::quiet_NaN();
      }
    }
  };

  const int threads = std::clamp(jobs, 1, static_cast<int>(values.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ofstream csv(out / "sweep.csv", std::ios::binary);
  write_sweep_csv(parameter, rows, csv);
  return rows;
}

void write_sweep_csv(const std::string& parameter, const std::vector<SweepRow>& rows, std::ostream& out) {
  out << parameter << ",final_error,max_abs_k,diverged,converged,error\n";
  for (const SweepRow& r : rows) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out << r.value << ',' << format_number(r.final_error) << ',' << format_number(r.max_abs_k) << ','
        << (r.diverged ? 1 : 0) << ',' << (r.converged ? 1 : 0) << ',' << err << '\n';
  }
}

}  // namespace nashseek
