#pragma once

// Scenario builders for tests, assembled directly from library types.

#include "nashseek/sim_engine.hpp"

namespace fixture {

using namespace nashseek;

inline const double kX0[14] = {-5, 3, -4, -6, 1, 8, 0, -8, -1, 10, 1, 2, 3, 0};
inline const double kB[7][2] = {{3, 3}, {5, 5}, {-2, -2}, {1, 2}, {-3, -3}, {-1, -1}, {2, 2}};

inline Vec pair(double a, double b) { return (Vec(2) << a, b).finished(); }

inline Scenario estimator_only(double delta = 10.0, double T = 40.0, double h = 1e-3, int stride = 10) {
  Scenario s;
  s.name = "estimator_only";
  s.game = connectivity_game();
  s.graph = CommGraph::cycle(7);
  s.estimator = FixedGains{delta, {}};
  s.integration = {T, h, stride};
  return s;
}

// First-order sensors with phi_i = i x, hidden theta per player.
inline Scenario first_order(double theta = 1.0, double T = 1.0, double h = 2e-4, int stride = 50,
                            double b_sign = 1.0) {
  Scenario s = estimator_only(10.0, T, h, stride);
  s.name = "first_order";
  for (int i = 0; i < 7; ++i) {
    PlayerSetup p;
    p.plant.kind = PlantKind::FirstOrder;
    p.plant.hidden.b = b_sign * pair(kB[i][0], kB[i][1]);
    p.plant.hidden.theta = Vec::Constant(2, theta);
    p.plant.phi = make_nonlinearity("linear", i + 1.0);
    p.controller = ControllerFamily::FirstOrder;
    p.x0 = pair(kX0[2 * i], kX0[2 * i + 1]);
    s.players.push_back(p);
  }
  return s;
}

// Players 1-6 on integrator chains, player 7 general second order with backstepping.
inline Scenario mixed(double T = 0.01, double h = 1e-6, int stride = 100) {
  Scenario s = first_order(1.0, T, h, stride);
  s.name = "mixed";
  for (int i = 0; i < 6; ++i) {
    s.players[i].plant.kind = PlantKind::SecondOrderChain;
    s.players[i].controller = ControllerFamily::SecondOrder;
  }
  PlayerSetup& p7 = s.players[6];
  p7.plant.kind = PlantKind::GeneralSecondOrder;
  p7.plant.hidden = {pair(2, 2), pair(1, 1), pair(2, 2), pair(1, 1)};
  p7.plant.phi = make_nonlinearity("linear", 7.0);
  p7.plant.phi2 = make_nonlinearity("component_linear", 7.0);
  p7.controller = ControllerFamily::Backstepping;
  return s;
}

}  // namespace fixture
