#include "nashseek/regulators.hpp"

#include <cmath>

#include "nashseek/errors.hpp"

namespace nashseek {

double Nussbaum::operator()(double k) const {
  return kind == NussbaumKind::SinSquared ? k * k * std::sin(k) : k * k * std::cos(k);
}

double Nussbaum::derivative(double k) const {
  if (kind == NussbaumKind::SinSquared) return 2.0 * k * std::sin(k) + k * k * std::cos(k);
  return 2.0 * k * std::cos(k) - k * k * std::sin(k);
}

double nussbaum(double k) { return Nussbaum{}(k); }
double nussbaum_prime(double k) { return Nussbaum{}.derivative(k); }

Nonlinearity make_nonlinearity(const std::string& name, double coefficient) {
  Nonlinearity phi;
  phi.name = name;
  phi.coefficient = coefficient;
  if (name == "zero") {
    phi.coefficient = 0.0;
    phi.value = [](const Vec& x, const Vec&) { return Vec::Zero(x.size()).eval(); };
    phi.slope = phi.value;
  } else if (name == "linear") {
    phi.value = [coefficient](const Vec& x, const Vec&) { return (coefficient * x).eval(); };
    phi.slope = [coefficient](const Vec& x, const Vec&) {
      return Vec::Constant(x.size(), coefficient).eval();
    };
  } else if (name == "component_linear") {
    phi.value = [coefficient](const Vec& x, const Vec& v) {
      if (x.size() != 2 || v.size() != 2) {
        throw DimensionError("component_linear needs two-dimensional x and v");
      }
      return Vec(Eigen::Vector2d(coefficient * x[1], coefficient * v[1]));
    };
    // Neither component depends on its own x_c.
    phi.slope = [](const Vec& x, const Vec&) { return Vec::Zero(x.size()).eval(); };
  } else {
    throw ConfigError("phi.name", "unknown nonlinearity '" + name + "'");
  }
  return phi;
}

FirstOrderOutput first_order_control(const FirstOrderInput& in, const Nussbaum& n0) {
  const double e = in.x - in.y;
  const double w = e + in.phi * in.theta_hat;
  return {n0(in.k) * w, e * w, in.phi * e};
}

NoUncertaintyOutput first_order_control_no_uncertainty(double x, double y, double k,
                                                       const Nussbaum& n0) {
  const double e = x - y;
  return {n0(k) * e, e * e};
}

SecondOrderOutput second_order_control(const SecondOrderInput& in, const Nussbaum& n0) {
  const double xi = in.x - in.y + in.v;
  const double w = xi + in.phi * in.theta_hat + (in.x_dot - in.y_dot);
  return {n0(in.k) * w, xi * w, in.phi * xi};
}

BacksteppingOutput backstepping_control(const BacksteppingInput& in, const Nussbaum& n0) {
  BacksteppingOutput out;
  const double e = in.x - in.y;
  const double w1 = e + in.phi1 * in.theta_hat1;
  const double n1 = n0(in.k1);

  // Step 2: virtual control for v.
  out.alpha = n1 * w1;
  out.k1_dot = e * w1;
  out.theta_hat1_dot = in.phi1 * e;
  out.beta = in.v - out.alpha;

  // Step 3: terms of -d(alpha)/dt grouped by the unknowns they multiply.
  out.psi1 = -n1 * (in.phi1 + in.phi1_slope * in.theta_hat1 * in.phi1);
  out.psi2 = -n0.derivative(in.k1) * e * w1 * w1 - n1 * (-in.y_dot + in.phi1 * in.phi1 * e);
  out.psi3 = -n1 * (in.phi1_slope * in.theta_hat1 + 1.0) * in.v;

  const double w2 = out.beta + in.phi2 * in.theta_bar2 + out.psi1 * in.theta_bar1 + out.psi2 +
                    out.psi3 * in.b_bar1;
  out.u = n0(in.k2) * w2;
  out.k2_dot = out.beta * w2;
  out.theta_bar2_dot = out.beta * in.phi2;
  out.theta_bar1_dot = out.beta * out.psi1;
  out.b_bar1_dot = out.beta * out.psi3;
  return out;
}

}  // namespace nashseek
