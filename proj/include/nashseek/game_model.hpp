#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace nashseek {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

using ObjectiveFn = std::function<double(const Vec& profile)>;
using GradientFn = std::function<Vec(const Vec& profile)>;

// Pseudo-gradient P(x) = Q x + c, available when every objective is quadratic.
struct AffinePseudoGradient {
  Mat Q;
  Vec c;
};

// An N-player game on stacked action profiles. Player i owns the slice
// [offset(i), offset(i) + action_dims[i]) of the profile; indices are 0-based.
struct GameDefinition {
  std::vector<int> action_dims;
  std::vector<ObjectiveFn> objectives;
  // partial_gradients[i] returns d f_i / d x_i, a vector of length action_dims[i].
  std::vector<GradientFn> partial_gradients;
  std::optional<Vec> analytic_ne;
  std::optional<AffinePseudoGradient> affine;

  int n_players() const { return static_cast<int>(action_dims.size()); }
  int total_dim() const;
  int offset(int player) const;

  double objective(int player, const Vec& profile) const;
  Vec partial_gradient(int player, const Vec& profile) const;
};

// Quadratic self-cost plus directed squared-distance couplings:
//   f_i(x) = x_i' M_ii x_i + x_i' m_i + offset_i + sum_{(i,j)} ||x_i - x_j||^2.
// A coupling (i, j) belongs to player i only.
struct QuadraticGameSpec {
  struct Player {
    Mat self_term;  // M_ii
    Vec linear;     // m_i
    double offset = 0.0;
  };
  std::vector<Player> players;
  std::vector<std::pair<int, int>> couplings;  // 0-based (owner, other)
};

// Throws ConfigError on invalid specs (non-finite entries, bad couplings).
void validate(const QuadraticGameSpec& spec);

AffinePseudoGradient assemble_affine(const QuadraticGameSpec& spec);
GameDefinition make_quadratic_game(const QuadraticGameSpec& spec);

// 7 mobile sensors, d_i = 2, NE at (-1/4, -1) for every player.
QuadraticGameSpec connectivity_game_spec();
GameDefinition connectivity_game();

Vec pseudo_gradient(const GameDefinition& game, const Vec& profile);

// Axis-aligned sampling box [lo, hi]^n.
struct SampleBox {
  double lo = -10.0;
  double hi = 10.0;
};

struct SolveOptions {
  double tolerance = 1e-11;  // on ||P(x)||_inf
  int max_iterations = 200000;
  SampleBox box{};
  int n_pairs = 400;
  std::uint64_t seed = 20201;
};

Vec solve_nash(const GameDefinition& game, const SolveOptions& options = {});

// Lower bound on the strong-monotonicity constant m. Exact for affine games.
double estimate_monotonicity(const GameDefinition& game, const SampleBox& box,
                             int n_pairs, std::uint64_t seed = 7);

// Upper bound on the Lipschitz constant of player i's partial gradient.
// Exact for affine games.
double estimate_lipschitz(const GameDefinition& game, int player, const SampleBox& box,
                          int n_pairs, std::uint64_t seed = 11);

// Lipschitz estimate of the whole stacked pseudo-gradient.
double estimate_pseudo_gradient_lipschitz(const GameDefinition& game, const SampleBox& box,
                                          int n_pairs, std::uint64_t seed = 13);

// Named games available to scenario configs.
class GameRegistry {
 public:
  using Factory = std::function<GameDefinition()>;

  static GameRegistry& instance();

  void add(const std::string& name, Factory factory);
  bool contains(const std::string& name) const;
  GameDefinition make(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  GameRegistry();
  std::vector<std::pair<std::string, Factory>> entries_;
};

}  // namespace nashseek
