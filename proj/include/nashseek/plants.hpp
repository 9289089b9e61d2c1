#pragma once

#include "nashseek/game_model.hpp"
#include "nashseek/regulators.hpp"

namespace nashseek {

enum class PlantKind {
  FirstOrder,          // x' = b u + phi(x) theta
  SecondOrderChain,    // x' = v, v' = b u + phi(x) theta
  GeneralSecondOrder,  // x' = b1 v + phi1(x) theta1, v' = b2 u + phi2(x, v) theta2
};

// Ground-truth parameters. Controllers never see these. All vectors are
// per-component (diagonal gain semantics). For GeneralSecondOrder, `b` and
// `theta` are the first-stage (b1, theta1) values.
struct HiddenParameters {
  Vec b;
  Vec theta;
  Vec b2;
  Vec theta2;
};

struct PlantSpec {
  PlantKind kind = PlantKind::FirstOrder;
  HiddenParameters hidden;
  Nonlinearity phi = make_nonlinearity("zero", 0.0);
  Nonlinearity phi2 = make_nonlinearity("zero", 0.0);  // GeneralSecondOrder only

  int dim() const { return static_cast<int>(hidden.b.size()); }
  bool has_velocity() const { return kind != PlantKind::FirstOrder; }
};

struct PlantState {
  Vec x;
  Vec v;  // empty for FirstOrder
};

struct PlantDerivative {
  Vec x_dot;
  Vec v_dot;
};

// Throws ConfigError for zero gains or inconsistent sizes.
void validate(const PlantSpec& spec, const std::string& key = "plant");

PlantDerivative plant_rhs(const PlantSpec& spec, const PlantState& s, const Vec& u);

const char* to_string(PlantKind kind);

}  // namespace nashseek
