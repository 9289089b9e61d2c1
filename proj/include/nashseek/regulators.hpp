#pragma once

#include <functional>
#include <string>

#include "nashseek/game_model.hpp"

namespace nashseek {

enum class NussbaumKind { SinSquared, CosSquared };  // k^2 sin k, k^2 cos k

struct Nussbaum {
  NussbaumKind kind = NussbaumKind::SinSquared;

  double operator()(double k) const;
  double derivative(double k) const;
};

// Default gain N0(k) = k^2 sin k and its derivative.
double nussbaum(double k);
double nussbaum_prime(double k);

// A known nonlinearity phi(x, v) evaluated per action component. `slope`
// returns d phi_c / d x_c for each component c (the per-channel derivative the
// backstepping design needs).
struct Nonlinearity {
  std::string name = "zero";
  double coefficient = 0.0;
  std::function<Vec(const Vec& x, const Vec& v)> value;
  std::function<Vec(const Vec& x, const Vec& v)> slope;

  Vec operator()(const Vec& x, const Vec& v) const { return value(x, v); }
};

// Registry of named families:
//   zero                 phi = 0
//   linear(c)            phi_c = c * x_c
//   component_linear(c)  phi = [c * x_2, c * v_2]   (two-dimensional actions)
// Throws ConfigError for unknown names.
Nonlinearity make_nonlinearity(const std::string& name, double coefficient);

// ---- First-order family ----------------------------------------------------

struct FirstOrderInput {
  double x = 0.0;
  double y = 0.0;
  double y_dot = 0.0;  // unused by this family
  double k = 0.0;
  double theta_hat = 0.0;
  double phi = 0.0;  // phi(x), already evaluated
};

struct FirstOrderOutput {
  double u = 0.0;
  double k_dot = 0.0;
  double theta_hat_dot = 0.0;
};

FirstOrderOutput first_order_control(const FirstOrderInput& in, const Nussbaum& n0 = {});

struct NoUncertaintyOutput {
  double u = 0.0;
  double k_dot = 0.0;
};

// For plants without a parametric term: u = N0(k)(x - y), k' = (x - y)^2.
NoUncertaintyOutput first_order_control_no_uncertainty(double x, double y, double k,
                                                       const Nussbaum& n0 = {});

// ---- Second-order (integrator chain) family ----------------------------------

struct SecondOrderInput {
  double x = 0.0;
  double y = 0.0;
  double v = 0.0;
  double y_dot = 0.0;
  double x_dot = 0.0;  // known plant output, equal to v for the chain
  double k = 0.0;
  double theta_hat = 0.0;
  double phi = 0.0;
};

using SecondOrderOutput = FirstOrderOutput;

SecondOrderOutput second_order_control(const SecondOrderInput& in, const Nussbaum& n0 = {});

// ---- Backstepping family (general second-order plants) -------------------------

struct BacksteppingInput {
  double x = 0.0;
  double y = 0.0;
  double y_dot = 0.0;
  double v = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double theta_hat1 = 0.0;
  double theta_bar1 = 0.0;
  double theta_bar2 = 0.0;
  double b_bar1 = 0.0;
  double phi1 = 0.0;       // phi_1(x)
  double phi1_slope = 0.0; // d phi_1 / d x
  double phi2 = 0.0;       // phi_2(x, v)
};

struct BacksteppingOutput {
  double u = 0.0;
  double alpha = 0.0;  // virtual control for v
  double beta = 0.0;   // v - alpha
  double psi1 = 0.0;
  double psi2 = 0.0;
  double psi3 = 0.0;
  double k1_dot = 0.0;
  double theta_hat1_dot = 0.0;
  double k2_dot = 0.0;
  double theta_bar1_dot = 0.0;
  double theta_bar2_dot = 0.0;
  double b_bar1_dot = 0.0;
};

BacksteppingOutput backstepping_control(const BacksteppingInput& in, const Nussbaum& n0 = {});

}  // namespace nashseek
