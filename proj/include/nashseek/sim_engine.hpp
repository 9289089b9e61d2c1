#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "nashseek/estimator.hpp"
#include "nashseek/game_model.hpp"
#include "nashseek/network.hpp"
#include "nashseek/plants.hpp"
#include "nashseek/regulators.hpp"

namespace nashseek {

enum class ControllerFamily {
  FirstOrder,               // FirstOrder plants
  FirstOrderNoUncertainty,  // FirstOrder plants with phi = 0
  SecondOrder,              // SecondOrderChain plants
  Backstepping,             // GeneralSecondOrder plants
};

const char* to_string(ControllerFamily family);

struct PlayerSetup {
  PlantSpec plant;
  ControllerFamily controller = ControllerFamily::FirstOrder;
  Nussbaum nussbaum{};
  Vec x0;
  Vec v0;  // empty means zero
};

// Fixed step `h` used on [previous until, until). Samples stay uniform: every
// segment step must divide the sample spacing stride * h of the main step, and
// every `until` must be a multiple of it.
struct StepSegment {
  double until = 0.0;
  double h = 0.0;
};

struct IntegrationSettings {
  double T = 100.0;
  double h = 1e-3;
  int stride = 10;
  std::vector<StepSegment> schedule;  // leading refinements; empty means h throughout
  // Any state entry beyond this magnitude counts as divergence.
  double divergence_bound = 1e12;
};

// A complete closed-loop experiment. An empty `players` list runs the
// estimator alone.
struct Scenario {
  std::string name;
  GameDefinition game;
  CommGraph graph = CommGraph::cycle(1);
  EstimatorMode estimator = FixedGains{};
  std::vector<PlayerSetup> players;
  IntegrationSettings integration;
  std::string config_hash;
};

// Throws ConfigError for disconnected graphs, size mismatches, controller and
// plant kinds that do not fit together, and bad integration settings.
void validate(const Scenario& scenario);

// Adaptive states of one player, each of length d_i. For the backstepping
// family `k` and `theta_hat` hold the first-stage k_{i1}, theta_hat_{i1}.
struct RegulatorState {
  Vec k;
  Vec theta_hat;
  Vec k2;
  Vec theta_bar1;
  Vec theta_bar2;
  Vec b_bar1;
};

struct ClosedLoopState {
  std::vector<PlantState> plants;
  std::vector<RegulatorState> regulators;
  EstimatorState estimator;
};

struct Slice {
  std::string name;
  int offset = 0;
  int size = 0;
};

// Maps the flat ODE state to named slices. Player blocks come first (x, v,
// regulator states), then the estimator's y, z and adaptive gains.
class StateLayout {
 public:
  struct PlayerOffsets {
    int dim = 0;
    int x = -1, v = -1, k = -1, theta_hat = -1;
    int k2 = -1, theta_bar1 = -1, theta_bar2 = -1, b_bar1 = -1;
  };

  explicit StateLayout(const Scenario& scenario);

  int size() const { return size_; }
  const std::vector<Slice>& slices() const { return slices_; }
  const std::vector<PlayerOffsets>& players() const { return players_; }
  int y_offset() const { return y_; }
  int z_offset() const { return z_; }
  int delta_offset() const { return delta_; }
  int delta_size() const { return delta_size_; }
  int total_action_dim() const { return total_dim_; }

  // Throws std::out_of_range for unknown names.
  const Slice& find(const std::string& name) const;
  std::string slice_at(int index) const;

  ClosedLoopState unpack(const Vec& s) const;
  Vec pack(const ClosedLoopState& parts) const;

 private:
  int add(const std::string& name, int size);

  std::vector<Slice> slices_;
  std::vector<PlayerOffsets> players_;
  int y_ = 0, z_ = 0, delta_ = 0, delta_size_ = 0, total_dim_ = 0, n_players_ = 0, size_ = 0;
};

// One right-hand-side evaluation together with the logged diagnostics.
struct Evaluation {
  Vec derivative;
  Vec u;             // stacked control inputs, one per action channel
  double y_dot_sq = 0.0;  // ||y'||^2
};

using Rhs = std::function<Vec(const Vec&)>;

// The assembled closed loop: estimator -> regulators -> plants. Plant
// parameters are consumed only by the plant step; every controller call is
// built from measured states, the reference signals and phi values.
class ClosedLoop {
 public:
  explicit ClosedLoop(Scenario scenario);

  const Scenario& scenario() const { return scenario_; }
  const StateLayout& layout() const { return layout_; }

  Vec initial_state() const;
  Evaluation evaluate(const Vec& s) const;
  Vec rhs(const Vec& s) const { return evaluate(s).derivative; }
  Rhs rhs_function() const;

  // Flat indices of every Nussbaum argument (k and, for backstepping, k2).
  const std::vector<int>& gain_indices() const { return gain_indices_; }
  const std::vector<std::string>& gain_names() const { return gain_names_; }

 private:
  Scenario scenario_;
  StateLayout layout_;
  std::vector<int> gain_indices_;
  std::vector<std::string> gain_names_;
};

ClosedLoop assemble(const Scenario& scenario);

// Classical four-stage Runge-Kutta step. Throws DivergenceError (carrying the
// flat index of the first bad entry) if any stage or the result is non-finite
// or exceeds `bound` in magnitude. `t` is used for error reporting only.
Vec rk4_step(const Rhs& rhs, const Vec& state, double h, double t = 0.0,
             double bound = std::numeric_limits<double>::infinity());

struct RunLog {
  std::vector<double> times;
  Mat states;    // one row per sample
  Mat controls;  // u per action channel
  Mat gain_rates;  // d/dt of each Nussbaum argument, columns follow ClosedLoop::gain_indices
  Vec y_dot_sq;

  std::vector<int> gain_indices;
  std::vector<std::string> gain_names;
  std::optional<StateLayout> layout;
  std::string scenario_name;
  std::string config_hash;
  double h = 0.0;
  double T = 0.0;
  int stride = 1;

  bool diverged = false;
  std::string divergence_message;
  double divergence_time = 0.0;
  std::string divergence_slice;

  int sample_count() const { return static_cast<int>(times.size()); }
};

// Number of samples a complete run logs: floor(T / (h * stride)) + 1 without a
// schedule.
long expected_samples(const IntegrationSettings& settings);

// Integrates from the scenario's initial state. Divergence is reported on the
// returned (partial) log rather than thrown.
RunLog integrate(const Scenario& scenario);
RunLog integrate(const ClosedLoop& loop, const Vec& initial);

struct NamedStat {
  std::string name;
  double max_abs = 0.0;
  double plateau = 0.0;  // max - min over the final 10% of samples
  double final_value = 0.0;
};

struct Summary {
  // ||x(T) - x*||_inf over all players; falls back to y when there are no plants.
  double final_error = 0.0;
  double final_y_error = 0.0;

  std::vector<NamedStat> adaptive;  // k, theta_hat, k2, theta_bar*, b_bar1 channels
  std::vector<NamedStat> gains;     // estimator delta entries (adaptive mode)
  std::vector<NamedStat> velocities;
  std::vector<std::pair<std::string, double>> terminal_gain_rate;  // |k'| at T
  std::vector<std::pair<std::string, double>> max_abs_u;

  double y_dot_sq_integral = 0.0;
  double y_dot_sq_tail_fraction = 0.0;  // share of the integral over the last 20% of the horizon
  double min_gain_increment = 0.0;      // smallest sample-to-sample change of any delta

  double max_abs_adaptive = 0.0;
  double max_plateau = 0.0;
  double max_terminal_gain_rate = 0.0;
  double max_abs_velocity = 0.0;
  double max_final_velocity = 0.0;
  double max_abs_k = 0.0;
  bool all_finite = true;
};

// Throws std::invalid_argument for diverged or empty logs.
Summary metrics(const RunLog& log, const Vec& x_star);

// Least-squares slope of log ||y(t) - x*||_2 against t over samples in [t0, t1].
double log_error_slope(const RunLog& log, const Vec& x_star, double t0, double t1);

// Trapezoidal integral of a sampled series.
double trapezoid(const std::vector<double>& t, const Vec& values, int first = 0);

}  // namespace nashseek
