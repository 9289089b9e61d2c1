#include "nashseek/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nashseek/errors.hpp"

namespace nashseek {

namespace {

std::string player_key(int i) { return "players." + std::to_string(i + 1); }

bool compatible(ControllerFamily family, PlantKind kind) {
  switch (family) {
    case ControllerFamily::FirstOrder:
    case ControllerFamily::FirstOrderNoUncertainty:
      return kind == PlantKind::FirstOrder;
    case ControllerFamily::SecondOrder:
      return kind == PlantKind::SecondOrderChain;
    case ControllerFamily::Backstepping:
      return kind == PlantKind::GeneralSecondOrder;
  }
  return false;
}

bool has_theta_hat(ControllerFamily family) {
  return family != ControllerFamily::FirstOrderNoUncertainty;
}

Vec x_star_or_throw(const RunLog& log, const Vec& x_star) {
  const int total = log.layout->total_action_dim();
  if (x_star.size() != total) throw DimensionError("x_star has wrong length");
  return x_star;
}

// max - min over the trailing 10% of a column (at least two samples).
double plateau_of(const Mat& states, int column) {
  const int n = static_cast<int>(states.rows());
  const int tail = std::min(n, std::max(2, static_cast<int>(std::ceil(0.1 * n))));
  const auto seg = states.col(column).tail(tail);
  return seg.maxCoeff() - seg.minCoeff();
}

}  // namespace

const char* to_string(ControllerFamily family) {
  switch (family) {
    case ControllerFamily::FirstOrder: return "first_order";
    case ControllerFamily::FirstOrderNoUncertainty: return "first_order_no_uncertainty";
    case ControllerFamily::SecondOrder: return "second_order";
    case ControllerFamily::Backstepping: return "backstepping";
  }
  return "unknown";
}

namespace {

// True when `whole` is an integer multiple of `part` up to rounding.
bool divides(double part, double whole) {
  const double n = std::round(whole / part);
  return n >= 1.0 && std::abs(n * part - whole) <= 1e-9 * whole;
}

struct Phase {
  double start = 0.0;
  double h = 0.0;
  long steps = 0;
  long per_sample = 1;
};

std::vector<Phase> phases(const IntegrationSettings& cfg) {
  std::vector<Phase> out;
  const double spacing = cfg.h * cfg.stride;
  double start = 0.0;
  for (const StepSegment& seg : cfg.schedule) {
    const long per_sample = std::lround(spacing / seg.h);
    const long samples = std::lround((seg.until - start) / spacing);
    out.push_back({start, seg.h, samples * per_sample, per_sample});
    start = seg.until;
  }
  out.push_back({start, cfg.h, static_cast<long>(std::floor((cfg.T - start) / cfg.h + 1e-9)), cfg.stride});
  return out;
}

}  // namespace

void validate(const Scenario& scenario) {
  const GameDefinition& game = scenario.game;
  const int n = game.n_players();
  if (n < 1) throw ConfigError("game", "game has no players");
  if (scenario.graph.size() != n) {
    throw ConfigError("graph.nodes", "graph has " + std::to_string(scenario.graph.size()) +
                                         " nodes but the game has " + std::to_string(n) + " players");
  }
  if (!is_connected(scenario.graph)) {
    throw ConfigError("graph", scenario.graph.is_directed() ? "graph is not strongly connected"
                                                            : "graph is not connected");
  }
  if (const auto* fixed = std::get_if<FixedGains>(&scenario.estimator)) {
    if (!(fixed->delta > 0.0) || !std::isfinite(fixed->delta)) {
      throw ConfigError("estimator.delta", "must be positive");
    }
    if (fixed->delta_bar.size() != 0) {
      if (fixed->delta_bar.rows() != n || fixed->delta_bar.cols() != n) {
        throw ConfigError("estimator.delta_bar", "must be N x N");
      }
      if (!(fixed->delta_bar.array() > 0.0).all()) {
        throw ConfigError("estimator.delta_bar", "entries must be positive");
      }
    }
  }

  const auto& s = scenario.integration;
  if (!(s.h > 0.0) || !std::isfinite(s.h)) throw ConfigError("integration.h", "must be positive");
  if (!(s.T >= 0.0) || !std::isfinite(s.T)) throw ConfigError("integration.T", "must be non-negative");
  if (s.stride < 1) throw ConfigError("integration.stride", "must be at least 1");
  const double spacing = s.h * s.stride;
  double previous = 0.0;
  for (size_t k = 0; k < s.schedule.size(); ++k) {
    const std::string key = "integration.schedule." + std::to_string(k);
    const StepSegment& seg = s.schedule[k];
    if (!(seg.h > 0.0) || !std::isfinite(seg.h)) throw ConfigError(key + ".h", "must be positive");
    if (!(seg.until > previous) || seg.until > s.T) {
      throw ConfigError(key + ".until", "segments must end in increasing order within the horizon");
    }
    if (!divides(seg.h, spacing)) throw ConfigError(key + ".h", "must divide the sample spacing stride * h");
    if (!divides(spacing, seg.until)) throw ConfigError(key + ".until", "must be a multiple of stride * h");
    previous = seg.until;
  }

  if (scenario.players.empty()) return;
  if (static_cast<int>(scenario.players.size()) != n) {
    throw ConfigError("players", "expected " + std::to_string(n) + " players, got " +
                                     std::to_string(scenario.players.size()));
  }
  for (int i = 0; i < n; ++i) {
    const PlayerSetup& p = scenario.players[i];
    const std::string key = player_key(i);
    validate(p.plant, key);
    const int d = game.action_dims[i];
    if (p.plant.dim() != d) {
      throw ConfigError(key + ".hidden.b", "plant dimension " + std::to_string(p.plant.dim()) +
                                               " does not match action dimension " + std::to_string(d));
    }
    if (!compatible(p.controller, p.plant.kind)) {
      throw ConfigError(key + ".controller", std::string("controller '") + to_string(p.controller) +
                                                 "' cannot drive a '" + to_string(p.plant.kind) +
                                                 "' plant");
    }
    if (p.controller == ControllerFamily::FirstOrderNoUncertainty && p.plant.phi.name != "zero") {
      throw ConfigError(key + ".phi", "no-uncertainty controller requires phi = zero");
    }
    if (p.x0.size() != d || !p.x0.allFinite()) {
      throw ConfigError(key + ".x0", "expected " + std::to_string(d) + " finite components");
    }
    if (p.v0.size() != 0 && (p.v0.size() != d || !p.plant.has_velocity() || !p.v0.allFinite())) {
      throw ConfigError(key + ".v0", "velocity initial condition does not fit the plant");
    }
  }
}

// ---- StateLayout -------------------------------------------------------------

int StateLayout::add(const std::string& name, int size) {
  if (size == 0) return -1;
  const int off = size_;
  slices_.push_back({name, off, size});
  size_ += size;
  return off;
}

StateLayout::StateLayout(const Scenario& scenario) {
  const GameDefinition& game = scenario.game;
  total_dim_ = game.total_dim();
  n_players_ = game.n_players();
  for (int i = 0; i < static_cast<int>(scenario.players.size()); ++i) {
    const PlayerSetup& p = scenario.players[i];
    const std::string key = player_key(i);
    const int d = game.action_dims[i];
    PlayerOffsets o;
    o.dim = d;
    o.x = add(key + ".x", d);
    if (p.plant.has_velocity()) o.v = add(key + ".v", d);
    o.k = add(key + ".k", d);
    if (has_theta_hat(p.controller)) o.theta_hat = add(key + ".theta_hat", d);
    if (p.controller == ControllerFamily::Backstepping) {
      o.k2 = add(key + ".k2", d);
      o.theta_bar1 = add(key + ".theta_bar1", d);
      o.theta_bar2 = add(key + ".theta_bar2", d);
      o.b_bar1 = add(key + ".b_bar1", d);
    }
    players_.push_back(o);
  }
  y_ = add("estimator.y", total_dim_);
  z_ = add("estimator.z", game.n_players() * total_dim_);
  delta_size_ = gain_count(scenario.estimator, game);
  delta_ = add("estimator.delta", delta_size_);
}

const Slice& StateLayout::find(const std::string& name) const {
  for (const Slice& s : slices_) {
    if (s.name == name) return s;
  }
  throw std::out_of_range("no state slice named '" + name + "'");
}

std::string StateLayout::slice_at(int index) const {
  for (const Slice& s : slices_) {
    if (index >= s.offset && index < s.offset + s.size) {
      return s.name + "[" + std::to_string(index - s.offset) + "]";
    }
  }
  return "<out of range>";
}

ClosedLoopState StateLayout::unpack(const Vec& s) const {
  if (s.size() != size_) throw DimensionError("state vector does not match layout");
  auto seg = [&](int off, int d) { return off < 0 ? Vec() : Vec(s.segment(off, d)); };
  ClosedLoopState out;
  for (const PlayerOffsets& o : players_) {
    out.plants.push_back({seg(o.x, o.dim), seg(o.v, o.dim)});
    out.regulators.push_back({seg(o.k, o.dim), seg(o.theta_hat, o.dim), seg(o.k2, o.dim),
                              seg(o.theta_bar1, o.dim), seg(o.theta_bar2, o.dim),
                              seg(o.b_bar1, o.dim)});
  }
  out.estimator.y = s.segment(y_, total_dim_);
  out.estimator.z = s.segment(z_, static_cast<Eigen::Index>(n_players_) * total_dim_);
  out.estimator.delta = seg(delta_, delta_size_);
  return out;
}

Vec StateLayout::pack(const ClosedLoopState& parts) const {
  Vec s = Vec::Zero(size_);
  auto put = [&](int off, int size, const Vec& v, const char* what) {
    if (off < 0) {
      if (v.size() != 0) throw DimensionError(std::string("layout has no slot for ") + what);
      return;
    }
    if (v.size() != size) throw DimensionError(std::string("wrong size for ") + what);
    s.segment(off, size) = v;
  };
  if (parts.plants.size() != players_.size() || parts.regulators.size() != players_.size()) {
    throw DimensionError("player count does not match layout");
  }
  for (size_t i = 0; i < players_.size(); ++i) {
    const PlayerOffsets& o = players_[i];
    put(o.x, o.dim, parts.plants[i].x, "x");
    put(o.v, o.dim, parts.plants[i].v, "v");
    put(o.k, o.dim, parts.regulators[i].k, "k");
    put(o.theta_hat, o.dim, parts.regulators[i].theta_hat, "theta_hat");
    put(o.k2, o.dim, parts.regulators[i].k2, "k2");
    put(o.theta_bar1, o.dim, parts.regulators[i].theta_bar1, "theta_bar1");
    put(o.theta_bar2, o.dim, parts.regulators[i].theta_bar2, "theta_bar2");
    put(o.b_bar1, o.dim, parts.regulators[i].b_bar1, "b_bar1");
  }
  put(y_, total_dim_, parts.estimator.y, "y");
  put(z_, n_players_ * total_dim_, parts.estimator.z, "z");
  put(delta_, delta_size_, parts.estimator.delta, "delta");
  return s;
}

// ---- ClosedLoop -------------------------------------------------------------

ClosedLoop::ClosedLoop(Scenario scenario)
    : scenario_((validate(scenario), std::move(scenario))), layout_(scenario_) {
  for (size_t i = 0; i < scenario_.players.size(); ++i) {
    const auto& o = layout_.players()[i];
    for (int c = 0; c < o.dim; ++c) {
      const std::string suffix = std::to_string(i + 1) + "_" + std::to_string(c + 1);
      gain_indices_.push_back(o.k + c);
      gain_names_.push_back("k_" + suffix);
    }
    if (o.k2 >= 0) {
      for (int c = 0; c < o.dim; ++c) {
        gain_indices_.push_back(o.k2 + c);
        gain_names_.push_back("k2_" + std::to_string(i + 1) + "_" + std::to_string(c + 1));
      }
    }
  }
}

Vec ClosedLoop::initial_state() const {
  Vec s = Vec::Zero(layout_.size());
  for (size_t i = 0; i < scenario_.players.size(); ++i) {
    const auto& p = scenario_.players[i];
    const auto& o = layout_.players()[i];
    s.segment(o.x, o.dim) = p.x0;
    if (o.v >= 0 && p.v0.size() == o.dim) s.segment(o.v, o.dim) = p.v0;
  }
  return s;
}

Evaluation ClosedLoop::evaluate(const Vec& s) const {
  if (s.size() != layout_.size()) throw DimensionError("state vector does not match layout");
  const GameDefinition& game = scenario_.game;
  const int total = layout_.total_action_dim();

  Evaluation ev;
  ev.derivative = Vec::Zero(layout_.size());
  ev.u = Vec::Zero(scenario_.players.empty() ? 0 : total);

  // Optimization module.
  EstimatorState est{s.segment(layout_.y_offset(), total),
                     s.segment(layout_.z_offset(), static_cast<Eigen::Index>(game.n_players()) * total),
                     layout_.delta_size() > 0 ? Vec(s.segment(layout_.delta_offset(), layout_.delta_size()))
                                              : Vec()};
  const EstimatorDerivative ed = estimator_rhs(est, game, scenario_.graph, scenario_.estimator);
  ev.derivative.segment(layout_.y_offset(), total) = ed.y_dot;
  ev.derivative.segment(layout_.z_offset(), ed.z_dot.size()) = ed.z_dot;
  if (layout_.delta_size() > 0) {
    ev.derivative.segment(layout_.delta_offset(), layout_.delta_size()) = ed.delta_dot;
  }
  ev.y_dot_sq = ed.y_dot.squaredNorm();

  // State regulation module, one scalar channel at a time.
  for (size_t i = 0; i < scenario_.players.size(); ++i) {
    const PlayerSetup& p = scenario_.players[i];
    const auto& o = layout_.players()[i];
    const int off = game.offset(static_cast<int>(i));
    const int d = o.dim;

    PlantState plant{s.segment(o.x, d), o.v >= 0 ? Vec(s.segment(o.v, d)) : Vec()};
    const Vec phi = p.plant.phi(plant.x, plant.v);
    Vec u(d);

    for (int c = 0; c < d; ++c) {
      const double x = plant.x[c];
      const double y = est.y[off + c];
      const double y_dot = ed.y_dot[off + c];
      const double k = s[o.k + c];
      const double theta_hat = o.theta_hat >= 0 ? s[o.theta_hat + c] : 0.0;

      switch (p.controller) {
        case ControllerFamily::FirstOrder: {
          const auto r = first_order_control(
              {.x = x, .y = y, .y_dot = y_dot, .k = k, .theta_hat = theta_hat, .phi = phi[c]},
              p.nussbaum);
          u[c] = r.u;
          ev.derivative[o.k + c] = r.k_dot;
          ev.derivative[o.theta_hat + c] = r.theta_hat_dot;
          break;
        }
        case ControllerFamily::FirstOrderNoUncertainty: {
          const auto r = first_order_control_no_uncertainty(x, y, k, p.nussbaum);
          u[c] = r.u;
          ev.derivative[o.k + c] = r.k_dot;
          break;
        }
        case ControllerFamily::SecondOrder: {
          const double v = plant.v[c];
          const auto r = second_order_control({.x = x,
                                               .y = y,
                                               .v = v,
                                               .y_dot = y_dot,
                                               .x_dot = v,
                                               .k = k,
                                               .theta_hat = theta_hat,
                                               .phi = phi[c]},
                                              p.nussbaum);
          u[c] = r.u;
          ev.derivative[o.k + c] = r.k_dot;
          ev.derivative[o.theta_hat + c] = r.theta_hat_dot;
          break;
        }
        case ControllerFamily::Backstepping: {
          // Evaluated lazily per channel; cheap at these sizes.
          const Vec slope = p.plant.phi.slope(plant.x, plant.v);
          const Vec phi2 = p.plant.phi2(plant.x, plant.v);
          const auto r = backstepping_control({.x = x,
                                               .y = y,
                                               .y_dot = y_dot,
                                               .v = plant.v[c],
                                               .k1 = k,
                                               .k2 = s[o.k2 + c],
                                               .theta_hat1 = theta_hat,
                                               .theta_bar1 = s[o.theta_bar1 + c],
                                               .theta_bar2 = s[o.theta_bar2 + c],
                                               .b_bar1 = s[o.b_bar1 + c],
                                               .phi1 = phi[c],
                                               .phi1_slope = slope[c],
                                               .phi2 = phi2[c]},
                                              p.nussbaum);
          u[c] = r.u;
          ev.derivative[o.k + c] = r.k1_dot;
          ev.derivative[o.theta_hat + c] = r.theta_hat1_dot;
          ev.derivative[o.k2 + c] = r.k2_dot;
          ev.derivative[o.theta_bar1 + c] = r.theta_bar1_dot;
          ev.derivative[o.theta_bar2 + c] = r.theta_bar2_dot;
          ev.derivative[o.b_bar1 + c] = r.b_bar1_dot;
          break;
        }
      }
    }

    // Ground truth: the only place hidden parameters are read.
    const PlantDerivative pd = plant_rhs(p.plant, plant, u);
    ev.derivative.segment(o.x, d) = pd.x_dot;
    if (o.v >= 0) ev.derivative.segment(o.v, d) = pd.v_dot;
    ev.u.segment(off, d) = u;
  }
  return ev;
}

Rhs ClosedLoop::rhs_function() const {
  return [this](const Vec& s) { return evaluate(s).derivative; };
}

ClosedLoop assemble(const Scenario& scenario) { return ClosedLoop(scenario); }

// ---- Integration -------------------------------------------------------------

namespace {

void check_stage(const Vec& v, double bound, double t, const char* what) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v[k]) || std::abs(v[k]) > bound) {
      throw DivergenceError(std::string("non-finite or unbounded ") + what + " at t=" +
                                std::to_string(t),
                            t, static_cast<long>(k));
    }
  }
}

}  // namespace

Vec rk4_step(const Rhs& rhs, const Vec& state, double h, double t, double bound) {
  if (!(h > 0.0)) throw std::invalid_argument("step size must be positive");
  const double inf = std::numeric_limits<double>::infinity();
  const Vec k1 = rhs(state);
  check_stage(k1, inf, t, "stage 1");
  const Vec k2 = rhs(state + 0.5 * h * k1);
  check_stage(k2, inf, t, "stage 2");
  const Vec k3 = rhs(state + 0.5 * h * k2);
  check_stage(k3, inf, t, "stage 3");
  const Vec k4 = rhs(state + h * k3);
  check_stage(k4, inf, t, "stage 4");
  Vec next = state + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  check_stage(next, bound, t + h, "state");
  return next;
}

long expected_samples(const IntegrationSettings& settings) {
  long samples = 1;
  for (const Phase& p : phases(settings)) samples += p.steps / p.per_sample;
  return samples;
}

RunLog integrate(const Scenario& scenario) {
  const ClosedLoop loop(scenario);
  return integrate(loop, loop.initial_state());
}

RunLog integrate(const ClosedLoop& loop, const Vec& initial) {
  const IntegrationSettings& cfg = loop.scenario().integration;
  const StateLayout& layout = loop.layout();
  const long samples = expected_samples(cfg);
  const auto& gains = loop.gain_indices();

  RunLog log;
  log.layout = layout;
  log.scenario_name = loop.scenario().name;
  log.config_hash = loop.scenario().config_hash;
  log.h = cfg.h;
  log.T = cfg.T;
  log.stride = cfg.stride;
  log.gain_indices = gains;
  log.gain_names = loop.gain_names();
  log.times.reserve(samples);
  log.states.resize(samples, layout.size());
  log.y_dot_sq.resize(samples);
  log.gain_rates.resize(samples, static_cast<Eigen::Index>(gains.size()));

  Vec state = initial;
  long row = 0;
  auto record = [&](double t, const Evaluation& ev) {
    if (row == 0) log.controls.resize(samples, ev.u.size());
    log.times.push_back(t);
    log.states.row(row) = state.transpose();
    log.controls.row(row) = ev.u.transpose();
    log.y_dot_sq[row] = ev.y_dot_sq;
    for (size_t g = 0; g < gains.size(); ++g) log.gain_rates(row, static_cast<Eigen::Index>(g)) = ev.derivative[gains[g]];
    ++row;
  };
  auto truncate = [&] {
    log.states.conservativeResize(row, Eigen::NoChange);
    log.controls.conservativeResize(row, Eigen::NoChange);
    log.gain_rates.conservativeResize(row, Eigen::NoChange);
    log.y_dot_sq.conservativeResize(row);
  };

  const Rhs rhs = loop.rhs_function();
  try {
    record(0.0, loop.evaluate(state));
    for (const Phase& p : phases(cfg)) {
      for (long step = 1; step <= p.steps; ++step) {
        const double t = p.start + static_cast<double>(step - 1) * p.h;
        state = rk4_step(rhs, state, p.h, t, cfg.divergence_bound);
        if (step % p.per_sample == 0) {
          record(p.start + static_cast<double>(step) * p.h, loop.evaluate(state));
        }
      }
    }
  } catch (const DivergenceError& e) {
    log.diverged = true;
    log.divergence_message = e.what();
    log.divergence_time = e.time();
    log.divergence_slice = e.index() >= 0 ? layout.slice_at(static_cast<int>(e.index())) : e.slice();
    truncate();
  }
  return log;
}

// ---- Metrics -----------------------------------------------------------------

double trapezoid(const std::vector<double>& t, const Vec& values, int first) {
  double sum = 0.0;
  for (size_t k = static_cast<size_t>(first) + 1; k < t.size(); ++k) {
    sum += 0.5 * (t[k] - t[k - 1]) * (values[static_cast<Eigen::Index>(k)] + values[static_cast<Eigen::Index>(k - 1)]);
  }
  return sum;
}

Summary metrics(const RunLog& log, const Vec& x_star) {
  if (log.diverged) throw std::invalid_argument("metrics requested for a diverged run");
  if (log.sample_count() == 0 || !log.layout) throw std::invalid_argument("empty run log");
  const StateLayout& layout = *log.layout;
  const Vec xs = x_star_or_throw(log, x_star);
  const int last = log.sample_count() - 1;
  const int total = layout.total_action_dim();
  const auto final_row = log.states.row(last);

  Summary out;
  out.all_finite = log.states.allFinite();
  out.final_y_error = (final_row.segment(layout.y_offset(), total).transpose() - xs).lpNorm<Eigen::Infinity>();
  out.final_error = out.final_y_error;

  if (!layout.players().empty()) {
    double err = 0.0;
    for (size_t i = 0, off = 0; i < layout.players().size(); ++i) {
      const auto& o = layout.players()[i];
      for (int c = 0; c < o.dim; ++c) {
        err = std::max(err, std::abs(final_row[o.x + c] - xs[static_cast<Eigen::Index>(off) + c]));
      }
      off += static_cast<size_t>(o.dim);
    }
    out.final_error = err;
  }

  auto stat = [&](const std::string& name, int column) {
    NamedStat s;
    s.name = name;
    s.max_abs = log.states.col(column).cwiseAbs().maxCoeff();
    s.plateau = plateau_of(log.states, column);
    s.final_value = log.states(last, column);
    return s;
  };

  for (size_t i = 0; i < layout.players().size(); ++i) {
    const auto& o = layout.players()[i];
    const std::pair<const char*, int> adaptive[] = {{"k", o.k},
                                                    {"theta_hat", o.theta_hat},
                                                    {"k2", o.k2},
                                                    {"theta_bar1", o.theta_bar1},
                                                    {"theta_bar2", o.theta_bar2},
                                                    {"b_bar1", o.b_bar1}};
    for (const auto& [label, base] : adaptive) {
      if (base < 0) continue;
      for (int c = 0; c < o.dim; ++c) {
        out.adaptive.push_back(stat(std::string(label) + "_" + std::to_string(i + 1) + "_" +
                                        std::to_string(c + 1),
                                    base + c));
      }
    }
    if (o.v >= 0) {
      for (int c = 0; c < o.dim; ++c) {
        NamedStat s = stat("v_" + std::to_string(i + 1) + "_" + std::to_string(c + 1), o.v + c);
        out.max_abs_velocity = std::max(out.max_abs_velocity, s.max_abs);
        out.max_final_velocity = std::max(out.max_final_velocity, std::abs(s.final_value));
        out.velocities.push_back(std::move(s));
      }
    }
  }

  for (const NamedStat& s : out.adaptive) {
    out.max_abs_adaptive = std::max(out.max_abs_adaptive, s.max_abs);
    out.max_plateau = std::max(out.max_plateau, s.plateau);
    if (s.name.rfind("k_", 0) == 0 || s.name.rfind("k2_", 0) == 0) {
      out.max_abs_k = std::max(out.max_abs_k, s.max_abs);
    }
  }

  for (size_t g = 0; g < log.gain_names.size(); ++g) {
    const double rate = std::abs(log.gain_rates(last, static_cast<Eigen::Index>(g)));
    out.terminal_gain_rate.emplace_back(log.gain_names[g], rate);
    out.max_terminal_gain_rate = std::max(out.max_terminal_gain_rate, rate);
  }
  for (Eigen::Index c = 0; c < log.controls.cols(); ++c) {
    out.max_abs_u.emplace_back("u_" + std::to_string(c + 1), log.controls.col(c).cwiseAbs().maxCoeff());
  }

  if (layout.delta_size() > 0) {
    out.min_gain_increment = std::numeric_limits<double>::infinity();
    for (int k = 0; k < layout.delta_size(); ++k) {
      const int col = layout.delta_offset() + k;
      out.gains.push_back(stat("delta[" + std::to_string(k) + "]", col));
      for (int r = 1; r <= last; ++r) {
        out.min_gain_increment = std::min(out.min_gain_increment, log.states(r, col) - log.states(r - 1, col));
      }
    }
    if (last == 0) out.min_gain_increment = 0.0;
  }

  out.y_dot_sq_integral = trapezoid(log.times, log.y_dot_sq);
  if (out.y_dot_sq_integral > 0.0) {
    const double t_tail = 0.8 * log.times.back();
    int first = 0;
    while (first < last && log.times[static_cast<size_t>(first)] < t_tail) ++first;
    out.y_dot_sq_tail_fraction = trapezoid(log.times, log.y_dot_sq, first) / out.y_dot_sq_integral;
  }
  return out;
}

double log_error_slope(const RunLog& log, const Vec& x_star, double t0, double t1) {
  const StateLayout& layout = *log.layout;
  const int total = layout.total_action_dim();
  double st = 0, sy = 0, stt = 0, sty = 0;
  int n = 0;
  for (int r = 0; r < log.sample_count(); ++r) {
    const double t = log.times[static_cast<size_t>(r)];
    if (t < t0 || t > t1) continue;
    const double err = (log.states.row(r).segment(layout.y_offset(), total).transpose() - x_star).norm();
    if (!(err > 0.0)) continue;
    const double ly = std::log(err);
    st += t;
    sy += ly;
    stt += t * t;
    sty += t * ly;
    ++n;
  }
  if (n < 2) throw std::invalid_argument("not enough samples for a slope fit");
  return (n * sty - st * sy) / (n * stt - st * st);
}

}  // namespace nashseek
