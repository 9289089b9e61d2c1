#include "nashseek/plants.hpp"

#include <string>

#include "nashseek/errors.hpp"

namespace nashseek {

namespace {

void check_gains(const Vec& b, const std::string& key) {
  for (Eigen::Index c = 0; c < b.size(); ++c) {
    if (b[c] == 0.0 || !std::isfinite(b[c])) {
      throw ConfigError(key, "control gain component " + std::to_string(c + 1) +
                                 " must be finite and nonzero");
    }
  }
}

void check_size(const Vec& v, int d, const std::string& key) {
  if (v.size() != d) {
    throw ConfigError(key, "expected " + std::to_string(d) + " components, got " +
                               std::to_string(v.size()));
  }
  if (!v.allFinite()) throw ConfigError(key, "non-finite value");
}

}  // namespace

const char* to_string(PlantKind kind) {
  switch (kind) {
    case PlantKind::FirstOrder: return "first_order";
    case PlantKind::SecondOrderChain: return "second_order_chain";
    case PlantKind::GeneralSecondOrder: return "general_second_order";
  }
  return "unknown";
}

void validate(const PlantSpec& spec, const std::string& key) {
  const int d = spec.dim();
  if (d < 1) throw ConfigError(key + ".hidden.b", "plant needs at least one component");
  check_gains(spec.hidden.b, key + ".hidden.b");
  check_size(spec.hidden.theta, d, key + ".hidden.theta");
  if (spec.kind == PlantKind::GeneralSecondOrder) {
    check_size(spec.hidden.b2, d, key + ".hidden.b2");
    check_gains(spec.hidden.b2, key + ".hidden.b2");
    check_size(spec.hidden.theta2, d, key + ".hidden.theta2");
  }
}

PlantDerivative plant_rhs(const PlantSpec& spec, const PlantState& s, const Vec& u) {
  const int d = spec.dim();
  if (s.x.size() != d || u.size() != d) throw DimensionError("plant state or input size mismatch");
  if (spec.has_velocity() && s.v.size() != d) throw DimensionError("plant velocity size mismatch");

  const HiddenParameters& p = spec.hidden;
  PlantDerivative out;
  switch (spec.kind) {
    case PlantKind::FirstOrder:
      out.x_dot = p.b.cwiseProduct(u) + spec.phi(s.x, s.v).cwiseProduct(p.theta);
      break;
    case PlantKind::SecondOrderChain:
      out.x_dot = s.v;
      out.v_dot = p.b.cwiseProduct(u) + spec.phi(s.x, s.v).cwiseProduct(p.theta);
      break;
    case PlantKind::GeneralSecondOrder:
      out.x_dot = p.b.cwiseProduct(s.v) + spec.phi(s.x, s.v).cwiseProduct(p.theta);
      out.v_dot = p.b2.cwiseProduct(u) + spec.phi2(s.x, s.v).cwiseProduct(p.theta2);
      break;
  }
  return out;
}

}  // namespace nashseek
