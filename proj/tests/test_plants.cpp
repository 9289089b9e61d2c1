#include "doctest.h"

#include "nashseek/errors.hpp"
#include "nashseek/plants.hpp"

using namespace nashseek;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

PlantSpec player7() {
  PlantSpec p;
  p.kind = PlantKind::GeneralSecondOrder;
  p.hidden = {v2(2, 2), v2(1, 1), v2(2, 2), v2(1, 1)};
  p.phi = make_nonlinearity("linear", 7.0);
  p.phi2 = make_nonlinearity("component_linear", 7.0);
  return p;
}

}  // namespace

TEST_CASE("first-order plant") {
  PlantSpec p;
  p.hidden = {Vec::Constant(1, 3.0), Vec::Constant(1, 1.0), {}, {}};
  p.phi = make_nonlinearity("linear", 1.0);
  const auto d = plant_rhs(p, {Vec::Constant(1, 2.0), {}}, Vec::Zero(1));
  CHECK(d.x_dot[0] == 2.0);
  CHECK(d.v_dot.size() == 0);
  CHECK(plant_rhs(p, {Vec::Constant(1, 2.0), {}}, Vec::Constant(1, 1.0)).x_dot[0] == 5.0);
}

TEST_CASE("second-order chain coasts without input") {
  PlantSpec p;
  p.kind = PlantKind::SecondOrderChain;
  p.hidden = {v2(3, 3), v2(1, 1), {}, {}};
  const auto d = plant_rhs(p, {v2(1, -2), v2(0.5, 4)}, Vec::Zero(2));
  CHECK(d.x_dot == v2(0.5, 4));
  CHECK(d.v_dot == Vec::Zero(2));
}

TEST_CASE("general second-order plant of the backstepping sensor") {
  const auto d = plant_rhs(player7(), {v2(1, 0), v2(0, 1)}, Vec::Zero(2));
  CHECK(d.x_dot == v2(7, 2));
  CHECK(d.v_dot == v2(0, 7));
}

TEST_CASE("zero input, state and phi give zero derivatives") {
  for (auto kind : {PlantKind::FirstOrder, PlantKind::SecondOrderChain, PlantKind::GeneralSecondOrder}) {
    PlantSpec p;
    p.kind = kind;
    p.hidden = {v2(2, -1), v2(1, 1), v2(1, 3), v2(1, 1)};
    PlantState s{Vec::Zero(2), p.has_velocity() ? Vec::Zero(2) : Vec()};
    const auto d = plant_rhs(p, s, Vec::Zero(2));
    CHECK(d.x_dot == Vec::Zero(2));
    if (p.has_velocity()) CHECK(d.v_dot == Vec::Zero(2));
  }
}

TEST_CASE("plant validation") {
  PlantSpec p;
  p.hidden = {v2(1, 0), v2(1, 1), {}, {}};
  try {
    validate(p, "players.3");
    FAIL("zero gain accepted");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "players.3.hidden.b");
  }
  p.hidden = {v2(1, 1), Vec::Ones(3), {}, {}};
  CHECK_THROWS_AS(validate(p), ConfigError);
  auto g = player7();
  g.hidden.b2 = v2(0, 1);
  CHECK_THROWS_AS(validate(g), ConfigError);
  CHECK_THROWS_AS(plant_rhs(player7(), {v2(0, 0), Vec()}, Vec::Zero(2)), DimensionError);
  CHECK(std::string(to_string(PlantKind::SecondOrderChain)) == "second_order_chain");
}
