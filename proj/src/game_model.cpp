#include "nashseek/game_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <string>

#include "nashseek/errors.hpp"

namespace nashseek {

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

void check_profile(const GameDefinition& game, const Vec& profile) {
  if (profile.size() != game.total_dim()) {
    throw DimensionError("profile has length " + std::to_string(profile.size()) +
                         ", game expects " + std::to_string(game.total_dim()));
  }
}

void check_player(const GameDefinition& game, int player) {
  if (player < 0 || player >= game.n_players()) {
    throw DimensionError("player index " + std::to_string(player) + " out of range");
  }
}

Vec sample_point(std::mt19937_64& rng, const SampleBox& box, int n) {
  std::uniform_real_distribution<double> dist(box.lo, box.hi);
  Vec p(n);
  for (int k = 0; k < n; ++k) p[k] = dist(rng);
  return p;
}

void check_sampling(const SampleBox& box, int n_pairs) {
  if (!(box.hi > box.lo) || !std::isfinite(box.lo) || !std::isfinite(box.hi)) {
    throw std::invalid_argument("sample box must be a bounded, non-empty interval");
  }
  if (n_pairs < 1) throw std::invalid_argument("n_pairs must be >= 1");
}

// Player rows [offset, offset + d) of the affine pseudo-gradient.
Mat player_rows(const GameDefinition& game, int player) {
  return game.affine->Q.middleRows(game.offset(player), game.action_dims[player]);
}

}  // namespace

int GameDefinition::total_dim() const {
  int total = 0;
  for (int d : action_dims) total += d;
  return total;
}

int GameDefinition::offset(int player) const {
  int off = 0;
  for (int i = 0; i < player; ++i) off += action_dims[i];
  return off;
}

double GameDefinition::objective(int player, const Vec& profile) const {
  check_player(*this, player);
  check_profile(*this, profile);
  return objectives[player](profile);
}

Vec GameDefinition::partial_gradient(int player, const Vec& profile) const {
  check_player(*this, player);
  check_profile(*this, profile);
  Vec g = partial_gradients[player](profile);
  if (g.size() != action_dims[player]) {
    throw DimensionError("partial gradient of player " + std::to_string(player) +
                         " has wrong length");
  }
  return g;
}

void validate(const QuadraticGameSpec& spec) {
  const int n = static_cast<int>(spec.players.size());
  if (n == 0) throw ConfigError("game", "quadratic game needs at least one player");
  for (int i = 0; i < n; ++i) {
    const auto& p = spec.players[i];
    const std::string key = "game.quadratic.players." + std::to_string(i + 1);
    const auto d = p.linear.size();
    if (d == 0) throw ConfigError(key, "action dimension must be positive");
    if (p.self_term.rows() != d || p.self_term.cols() != d) {
      throw ConfigError(key + ".m_ii", "self term must be " + std::to_string(d) + "x" +
                                           std::to_string(d));
    }
    if (!p.self_term.allFinite() || !p.linear.allFinite() || !std::isfinite(p.offset)) {
      throw ConfigError(key, "non-finite coefficient");
    }
  }
  for (const auto& [i, j] : spec.couplings) {
    if (i < 0 || i >= n || j < 0 || j >= n || i == j) {
      throw ConfigError("game.quadratic.couplings",
                        "coupling (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                            ") must reference two distinct valid players");
    }
    if (spec.players[i].linear.size() != spec.players[j].linear.size()) {
      throw ConfigError("game.quadratic.couplings", "coupled players must share dimension");
    }
  }
}

AffinePseudoGradient assemble_affine(const QuadraticGameSpec& spec) {
  validate(spec);
  const int n = static_cast<int>(spec.players.size());
  std::vector<int> offsets(n + 1, 0);
  for (int i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + static_cast<int>(spec.players[i].linear.size());

  AffinePseudoGradient a{Mat::Zero(offsets[n], offsets[n]), Vec::Zero(offsets[n])};
  for (int i = 0; i < n; ++i) {
    const auto& p = spec.players[i];
    const auto d = p.linear.size();
    a.Q.block(offsets[i], offsets[i], d, d) += p.self_term + p.self_term.transpose();
    a.c.segment(offsets[i], d) = p.linear;
  }
  for (const auto& [i, j] : spec.couplings) {
    const auto d = spec.players[i].linear.size();
    a.Q.block(offsets[i], offsets[i], d, d) += 2.0 * Mat::Identity(d, d);
    a.Q.block(offsets[i], offsets[j], d, d) -= 2.0 * Mat::Identity(d, d);
  }
  return a;
}

GameDefinition make_quadratic_game(const QuadraticGameSpec& spec) {
  GameDefinition game;
  game.affine = assemble_affine(spec);
  const int n = static_cast<int>(spec.players.size());
  for (const auto& p : spec.players) game.action_dims.push_back(static_cast<int>(p.linear.size()));

  std::vector<std::vector<int>> partners(n);
  for (const auto& [i, j] : spec.couplings) partners[i].push_back(j);

  for (int i = 0; i < n; ++i) {
    const int off = game.offset(i);
    const int d = game.action_dims[i];
    std::vector<int> partner_offsets;
    for (int j : partners[i]) partner_offsets.push_back(game.offset(j));
    const auto& p = spec.players[i];
    const Mat sym = p.self_term + p.self_term.transpose();

    game.objectives.push_back([=, m = p.self_term, lin = p.linear, c0 = p.offset](const Vec& x) {
      const Vec xi = x.segment(off, d);
      double f = xi.dot(m * xi) + xi.dot(lin) + c0;
      for (int oj : partner_offsets) f += (xi - x.segment(oj, d)).squaredNorm();
      return f;
    });
    game.partial_gradients.push_back([=, lin = p.linear](const Vec& x) {
      const Vec xi = x.segment(off, d);
      Vec g = sym * xi + lin;
      for (int oj : partner_offsets) g += 2.0 * (xi - x.segment(oj, d));
      return g;
    });
  }
  return game;
}

QuadraticGameSpec connectivity_game_spec() {
  QuadraticGameSpec spec;
  for (int i = 1; i <= 7; ++i) {
    QuadraticGameSpec::Player p;
    p.self_term = Eigen::Vector2d(2.0 * i, 1.0 * i).asDiagonal();
    p.linear = Eigen::Vector2d(1.0 * i, 2.0 * i);
    p.offset = 1.0 * i * i;
    spec.players.push_back(std::move(p));
  }
  // (owner, other), 1-based in the source description.
  const std::pair<int, int> couplings[] = {{1, 2}, {2, 3}, {3, 1}, {4, 3}, {5, 1},
                                           {5, 6}, {6, 3}, {6, 1}, {7, 2}};
  for (auto [i, j] : couplings) spec.couplings.emplace_back(i - 1, j - 1);
  return spec;
}

GameDefinition connectivity_game() {
  GameDefinition game = make_quadratic_game(connectivity_game_spec());
  Vec ne(14);
  for (int i = 0; i < 7; ++i) ne.segment<2>(2 * i) << -0.25, -1.0;
  game.analytic_ne = ne;
  return game;
}

Vec pseudo_gradient(const GameDefinition& game, const Vec& profile) {
  check_profile(game, profile);
  Vec p(game.total_dim());
  for (int i = 0, off = 0; i < game.n_players(); off += game.action_dims[i], ++i) {
    p.segment(off, game.action_dims[i]) = game.partial_gradient(i, profile);
  }
  return p;
}

Vec solve_nash(const GameDefinition& game, const SolveOptions& options) {
  const int n = game.total_dim();
  if (game.affine) {
    const Vec x = game.affine->Q.colPivHouseholderQr().solve(-game.affine->c);
    const double residual = pseudo_gradient(game, x).lpNorm<Eigen::Infinity>();
    if (!x.allFinite() || residual > 1e-9) {
      throw SolverError("affine pseudo-gradient system is singular or ill-conditioned", residual);
    }
    return x;
  }

  const double m = estimate_monotonicity(game, options.box, options.n_pairs, options.seed);
  const double lip =
      estimate_pseudo_gradient_lipschitz(game, options.box, options.n_pairs, options.seed + 1);
  if (!(m > 0.0) || !(lip > 0.0)) {
    throw SolverError("game is not strongly monotone on the sample box", m);
  }
  const double step = m / (lip * lip);

  Vec x = Vec::Zero(n);
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < options.max_iterations; ++it) {
    const Vec p = pseudo_gradient(game, x);
    residual = p.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(residual)) break;
    if (residual < options.tolerance) return x;
    x -= step * p;
  }
  throw SolverError("fixed-point iteration did not converge", residual);
}

double estimate_monotonicity(const GameDefinition& game, const SampleBox& box, int n_pairs,
                             std::uint64_t seed) {
  if (game.affine) {
    const Mat sym = 0.5 * (game.affine->Q + game.affine->Q.transpose());
    return Eigen::SelfAdjointEigenSolver<Mat>(sym, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  }
  check_sampling(box, n_pairs);
  std::mt19937_64 rng(seed);
  const int n = game.total_dim();
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n_pairs; ++s) {
    const Vec x = sample_point(rng, box, n);
    const Vec z = sample_point(rng, box, n);
    const double dist2 = (x - z).squaredNorm();
    if (dist2 == 0.0) continue;
    const double ratio = (x - z).dot(pseudo_gradient(game, x) - pseudo_gradient(game, z)) / dist2;
    best = std::min(best, ratio);
  }
  if (!std::isfinite(best)) throw std::invalid_argument("all sampled pairs were degenerate");
  return best;
}

double estimate_lipschitz(const GameDefinition& game, int player, const SampleBox& box,
                          int n_pairs, std::uint64_t seed) {
  check_player(game, player);
  if (game.affine) {
    const Mat rows = player_rows(game, player);
    return Eigen::JacobiSVD<Mat>(rows).singularValues()(0);
  }
  check_sampling(box, n_pairs);
  std::mt19937_64 rng(seed);
  const int n = game.total_dim();
  double best = -1.0;
  for (int s = 0; s < n_pairs; ++s) {
    const Vec x = sample_point(rng, box, n);
    const Vec z = sample_point(rng, box, n);
    const double dist = (x - z).norm();
    if (dist == 0.0) continue;
    const double ratio =
        (game.partial_gradient(player, x) - game.partial_gradient(player, z)).norm() / dist;
    best = std::max(best, ratio);
  }
  if (best < 0.0) throw std::invalid_argument("all sampled pairs were degenerate");
  return best;
}

double estimate_pseudo_gradient_lipschitz(const GameDefinition& game, const SampleBox& box,
                                          int n_pairs, std::uint64_t seed) {
  if (game.affine) return Eigen::JacobiSVD<Mat>(game.affine->Q).singularValues()(0);
  check_sampling(box, n_pairs);
  std::mt19937_64 rng(seed);
  const int n = game.total_dim();
  double best = -1.0;
  for (int s = 0; s < n_pairs; ++s) {
    const Vec x = sample_point(rng, box, n);
    const Vec z = sample_point(rng, box, n);
    const double dist = (x - z).norm();
    if (dist == 0.0) continue;
    best = std::max(best, (pseudo_gradient(game, x) - pseudo_gradient(game, z)).norm() / dist);
  }
  if (best < 0.0) throw std::invalid_argument("all sampled pairs were degenerate");
  return best;
}

GameRegistry& GameRegistry::instance() {
  static GameRegistry registry;
  return registry;
}

GameRegistry::GameRegistry() {
  entries_.emplace_back("connectivity", [] { return connectivity_game(); });
  // Two scalar players with tanh-shaped gradients: globally Lipschitz and
  // strongly monotone, but not affine.
  entries_.emplace_back("logcosh_pair", [] {
    GameDefinition g;
    g.action_dims = {1, 1};
    g.objectives.push_back([](const Vec& x) {
      return x[0] * x[0] + std::log(std::cosh(x[0] - 1.0)) + (x[0] - x[1]) * (x[0] - x[1]);
    });
    g.objectives.push_back(
        [](const Vec& x) { return x[1] * x[1] + std::log(std::cosh(x[1] + 1.0)); });
    g.partial_gradients.push_back([](const Vec& x) {
      return Vec::Constant(1, 2.0 * x[0] + std::tanh(x[0] - 1.0) + 2.0 * (x[0] - x[1]));
    });
    g.partial_gradients.push_back(
        [](const Vec& x) { return Vec::Constant(1, 2.0 * x[1] + std::tanh(x[1] + 1.0)); });
    return g;
  });
}

void GameRegistry::add(const std::string& name, Factory factory) {
  std::lock_guard lock(registry_mutex());
  for (auto& [n, f] : entries_) {
    if (n == name) {
      f = std::move(factory);
      return;
    }
  }
  entries_.emplace_back(name, std::move(factory));
}

bool GameRegistry::contains(const std::string& name) const {
  std::lock_guard lock(registry_mutex());
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.first == name; });
}

GameDefinition GameRegistry::make(const std::string& name) const {
  Factory factory;
  {
    std::lock_guard lock(registry_mutex());
    for (const auto& [n, f] : entries_) {
      if (n == name) factory = f;
    }
  }
  if (!factory) throw ConfigError("game.builtin", "unknown game '" + name + "'");
  return factory();
}

std::vector<std::string> GameRegistry::names() const {
  std::lock_guard lock(registry_mutex());
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

}  // namespace nashseek
