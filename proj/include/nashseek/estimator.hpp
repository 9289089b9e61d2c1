#pragma once

#include <variant>

#include "nashseek/game_model.hpp"
#include "nashseek/network.hpp"

namespace nashseek {

// How adaptive gains are indexed: one gain per (player, target) channel, or one
// per (player, target, component).
enum class GainIndexing { PerChannel, PerComponent };

// delta_ij = delta * delta_bar(i, j). An empty delta_bar means all ones.
struct FixedGains {
  double delta = 10.0;
  Mat delta_bar;
};

// delta_ij is integrated state driven by the squared local consensus error.
struct AdaptiveGains {
  GainIndexing indexing = GainIndexing::PerComponent;
};

using EstimatorMode = std::variant<FixedGains, AdaptiveGains>;

// z stacks every player's estimate of the full profile:
// index (i, j, c) -> i * D + offset(j) + c, with D the total action dimension.
// delta is empty in fixed mode.
struct EstimatorState {
  Vec y;
  Vec z;
  Vec delta;
};

struct EstimatorDerivative {
  Vec y_dot;
  Vec z_dot;
  Vec delta_dot;
};

// Number of gain entries the state carries for `mode` (0 in fixed mode).
int gain_count(const EstimatorMode& mode, const GameDefinition& game);

// Zero y, z and delta, sized for `game` and `mode`.
EstimatorState initial_estimator_state(const GameDefinition& game, const EstimatorMode& mode);

// Reference dynamics: y_i' = -grad_i f_i(z_i) and leader-following consensus
// on z. Throws DimensionError on size mismatch and DivergenceError on
// non-finite input.
EstimatorDerivative estimator_rhs(const EstimatorState& s, const GameDefinition& game,
                                  const CommGraph& g, const EstimatorMode& mode);

}  // namespace nashseek
