#include "nashseek/estimator.hpp"

#include <string>

#include "nashseek/errors.hpp"

namespace nashseek {

namespace {

void check_finite(const Vec& v, const char* name) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v[k])) {
      throw DivergenceError(std::string("estimator input ") + name + " is not finite", 0.0,
                            static_cast<long>(k), name);
    }
  }
}

}  // namespace

int gain_count(const EstimatorMode& mode, const GameDefinition& game) {
  const auto* adaptive = std::get_if<AdaptiveGains>(&mode);
  if (adaptive == nullptr) return 0;
  const int n = game.n_players();
  return adaptive->indexing == GainIndexing::PerChannel ? n * n : n * game.total_dim();
}

EstimatorState initial_estimator_state(const GameDefinition& game, const EstimatorMode& mode) {
  const int n = game.n_players();
  const int total = game.total_dim();
  return {Vec::Zero(total), Vec::Zero(n * total), Vec::Zero(gain_count(mode, game))};
}

EstimatorDerivative estimator_rhs(const EstimatorState& s, const GameDefinition& game,
                                  const CommGraph& g, const EstimatorMode& mode) {
  const int n = game.n_players();
  const int total = game.total_dim();
  if (g.size() != n) throw DimensionError("graph size does not match player count");
  if (s.y.size() != total || s.z.size() != n * total) {
    throw DimensionError("estimator state does not match game dimensions");
  }
  if (s.delta.size() != gain_count(mode, game)) {
    throw DimensionError("estimator gain vector has wrong length");
  }
  check_finite(s.y, "y");
  check_finite(s.z, "z");
  check_finite(s.delta, "delta");

  const Mat& a = g.adjacency();
  const auto* fixed = std::get_if<FixedGains>(&mode);
  const auto* adaptive = std::get_if<AdaptiveGains>(&mode);
  if (fixed != nullptr && fixed->delta_bar.size() != 0 &&
      (fixed->delta_bar.rows() != n || fixed->delta_bar.cols() != n)) {
    throw DimensionError("delta_bar must be N x N");
  }

  EstimatorDerivative d{Vec(total), Vec(n * total), Vec::Zero(s.delta.size())};

  for (int i = 0; i < n; ++i) {
    const int di = game.action_dims[i];
    d.y_dot.segment(game.offset(i), di) = -game.partial_gradient(i, s.z.segment(i * total, total));
  }

  for (int i = 0; i < n; ++i) {
    for (int j = 0, off_j = 0; j < n; off_j += game.action_dims[j], ++j) {
      for (int c = 0; c < game.action_dims[j]; ++c) {
        const int idx = i * total + off_j + c;
        const double zij = s.z[idx];
        double err = a(i, j) * (zij - s.y[off_j + c]);
        for (int k = 0; k < n; ++k) {
          if (a(i, k) != 0.0) err += a(i, k) * (zij - s.z[k * total + off_j + c]);
        }

        double gain;
        if (fixed != nullptr) {
          gain = fixed->delta * (fixed->delta_bar.size() == 0 ? 1.0 : fixed->delta_bar(i, j));
        } else if (adaptive->indexing == GainIndexing::PerComponent) {
          gain = s.delta[idx];
          d.delta_dot[idx] = err * err;
        } else {
          gain = s.delta[i * n + j];
          d.delta_dot[i * n + j] += err * err;
        }
        d.z_dot[idx] = -gain * err;
      }
    }
  }
  return d;
}

}  // namespace nashseek
