#include "doctest.h"
#include "oracles.hpp"

#include "nashseek/errors.hpp"
#include "nashseek/game_model.hpp"

using namespace nashseek;

namespace {

GameDefinition scalar_game(std::function<double(double)> f, std::function<double(double)> df) {
  GameDefinition g;
  g.action_dims = {1};
  g.objectives = {[f](const Vec& x) { return f(x[0]); }};
  g.partial_gradients = {[df](const Vec& x) { return Vec::Constant(1, df(x[0])); }};
  return g;
}

// f1 = (x1 - x2)^2 + x1^2, f2 = (x2 - 1)^2, given without the affine shortcut.
GameDefinition hand_two_player() {
  GameDefinition g;
  g.action_dims = {1, 1};
  g.objectives = {[](const Vec& x) { return (x[0] - x[1]) * (x[0] - x[1]) + x[0] * x[0]; },
                  [](const Vec& x) { return (x[1] - 1) * (x[1] - 1); }};
  g.partial_gradients = {[](const Vec& x) { return Vec::Constant(1, 2 * (x[0] - x[1]) + 2 * x[0]); },
                         [](const Vec& x) { return Vec::Constant(1, 2 * (x[1] - 1)); }};
  return g;
}

// Connectivity objective written out term by term, independent of the library.
double sensor_cost(int i, const Vec& x) {
  static const std::vector<std::vector<int>> owns = {{2}, {3}, {1}, {3}, {1, 6}, {3, 1}, {2}};
  const int p = i + 1;
  const double a = x[2 * i], b = x[2 * i + 1];
  double f = 2 * p * a * a + p * b * b + p * a + 2 * p * b + p * p;
  for (int j1 : owns[i]) {
    const int j = j1 - 1;
    f += (a - x[2 * j]) * (a - x[2 * j]) + (b - x[2 * j + 1]) * (b - x[2 * j + 1]);
  }
  return f;
}

}  // namespace

TEST_CASE("connectivity game equilibrium is (-1/4, -1) for every sensor") {
  const auto g = connectivity_game();
  REQUIRE(g.n_players() == 7);
  REQUIRE(g.analytic_ne);
  for (int i = 0; i < 7; ++i) {
    CHECK((*g.analytic_ne)[2 * i] == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK((*g.analytic_ne)[2 * i + 1] == doctest::Approx(-1.0).epsilon(1e-15));
  }
  const Vec p = pseudo_gradient(g, *g.analytic_ne);
  CHECK(p.lpNorm<Eigen::Infinity>() < 1e-9);
  const Vec g1 = g.partial_gradient(0, *g.analytic_ne);
  CHECK(std::abs(g1[0]) < 1e-12);
  CHECK(std::abs(g1[1]) < 1e-12);
}

TEST_CASE("partial gradients at the origin equal the linear terms") {
  const auto g = connectivity_game();
  const Vec zero = Vec::Zero(14);
  const Vec p = pseudo_gradient(g, zero);
  for (int i = 0; i < 7; ++i) {
    CHECK(p[2 * i] == doctest::Approx(i + 1));
    CHECK(p[2 * i + 1] == doctest::Approx(2 * (i + 1)));
  }
  const Vec fd = oracle::central_gradient([](const Vec& x) { return sensor_cost(0, x); }, zero, 0, 2);
  CHECK(fd[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(fd[1] == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("library objectives match the hand-written sensor costs") {
  const auto g = connectivity_game();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec x = oracle::uniform(14, rng);
    for (int i = 0; i < 7; ++i) CHECK(g.objective(i, x) == doctest::Approx(sensor_cost(i, x)).epsilon(1e-12));
  }
}

TEST_CASE("analytic partial gradients agree with central differences on builtin games") {
  std::mt19937_64 rng(42);
  for (const auto& name : GameRegistry::instance().names()) {
    CAPTURE(name);
    const auto g = GameRegistry::instance().make(name);
    for (int trial = 0; trial < 20; ++trial) {
      const Vec x = oracle::uniform(g.total_dim(), rng);
      for (int i = 0; i < g.n_players(); ++i) {
        const Vec analytic = g.partial_gradient(i, x);
        const Vec fd = oracle::central_gradient([&](const Vec& p) { return g.objective(i, p); }, x,
                                                g.offset(i), g.action_dims[i]);
        for (Eigen::Index c = 0; c < fd.size(); ++c) {
          CHECK(oracle::rel_err(analytic[c], fd[c]) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("assembled Q reproduces the pseudo-gradient") {
  const auto g = connectivity_game();
  REQUIRE(g.affine);
  std::mt19937_64 rng(5);
  const Vec p0 = pseudo_gradient(g, Vec::Zero(14));
  for (int trial = 0; trial < 10; ++trial) {
    const Vec x = oracle::uniform(14, rng);
    const Vec lhs = pseudo_gradient(g, x) - p0;
    CHECK((lhs - g.affine->Q * x).lpNorm<Eigen::Infinity>() < 1e-12);
  }
  // Same Q from finite differences of the hand-written costs.
  auto field = [](const Vec& x) {
    Vec p(14);
    for (int i = 0; i < 7; ++i) p.segment(2 * i, 2) = oracle::central_gradient(
        [i](const Vec& y) { return sensor_cost(i, y); }, x, 2 * i, 2);
    return p;
  };
  const Mat J = oracle::central_jacobian(field, Vec::Zero(14), 1e-3);
  CHECK((J - g.affine->Q).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("pseudo_gradient of a scalar square") {
  const auto g = scalar_game([](double x) { return x * x; }, [](double x) { return 2 * x; });
  CHECK(pseudo_gradient(g, Vec::Constant(1, 3.0))[0] == doctest::Approx(6.0));
}

TEST_CASE("solve_nash") {
  SUBCASE("connectivity game") {
    const auto g = connectivity_game();
    const Vec x = solve_nash(g);
    for (int i = 0; i < 7; ++i) {
      CHECK(x[2 * i] == doctest::Approx(-0.25).epsilon(1e-12));
      CHECK(x[2 * i + 1] == doctest::Approx(-1.0).epsilon(1e-12));
    }
    CHECK(pseudo_gradient(g, x).lpNorm<Eigen::Infinity>() < 1e-9);
  }
  SUBCASE("single player (x - 5)^2 through the iterative path") {
    const auto g = scalar_game([](double x) { return (x - 5) * (x - 5); }, [](double x) { return 2 * (x - 5); });
    CHECK(solve_nash(g)[0] == doctest::Approx(5.0).epsilon(1e-10));
  }
  SUBCASE("two-player game solved by elimination") {
    // 2(x2 - 1) = 0 -> x2 = 1; 2(x1 - x2) + 2 x1 = 0 -> x1 = x2 / 2.
    const Vec x = solve_nash(hand_two_player());
    CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(pseudo_gradient(hand_two_player(), x).lpNorm<Eigen::Infinity>() < 1e-9);
  }
  SUBCASE("nonlinear builtin") {
    const auto g = GameRegistry::instance().make("logcosh_pair");
    CHECK(pseudo_gradient(g, solve_nash(g)).lpNorm<Eigen::Infinity>() < 1e-9);
  }
}

TEST_CASE("estimate_monotonicity") {
  const SampleBox box{};
  SUBCASE("x^2 gives 2") {
    const auto g = scalar_game([](double x) { return x * x; }, [](double x) { return 2 * x; });
    CHECK(estimate_monotonicity(g, box, 200) == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("connectivity game matches an independent eigen-solve") {
    const auto g = connectivity_game();
    const Mat Q = g.affine->Q;
    const double expected = oracle::jacobi_eigenvalues(0.5 * (Q + Q.transpose())).front();
    const double m = estimate_monotonicity(g, box, 200);
    CHECK(m > 0.0);
    CHECK(std::abs(m - expected) < 1e-9);
  }
  SUBCASE("constant pseudo-gradient gives 0") {
    const auto g = scalar_game([](double x) { return 3 * x; }, [](double) { return 3.0; });
    CHECK(estimate_monotonicity(g, box, 200) == doctest::Approx(0.0));
  }
}

TEST_CASE("estimate_lipschitz") {
  const SampleBox box{};
  SUBCASE("x^2 gives 2") {
    const auto g = scalar_game([](double x) { return x * x; }, [](double x) { return 2 * x; });
    CHECK(estimate_lipschitz(g, 0, box, 200) == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("connectivity player 1 equals the norm of its rows of Q") {
    const auto g = connectivity_game();
    const Mat rows = g.affine->Q.topRows(2);
    const auto ev = oracle::jacobi_eigenvalues(rows * rows.transpose());
    CHECK(estimate_lipschitz(g, 0, box, 200) == doctest::Approx(std::sqrt(ev.back())).epsilon(1e-9));
  }
  SUBCASE("constant gradient gives 0") {
    const auto g = scalar_game([](double x) { return 3 * x; }, [](double) { return 3.0; });
    CHECK(estimate_lipschitz(g, 0, box, 200) == doctest::Approx(0.0));
  }
  SUBCASE("sampled bound on the nonlinear builtin stays below the analytic bound") {
    // grad_1 = 2 x1 + tanh(x1 - 1) + 2 (x1 - x2): Jacobian row norm <= sqrt(5^2 + 2^2).
    const auto g = GameRegistry::instance().make("logcosh_pair");
    const double l = estimate_lipschitz(g, 0, box, 400);
    CHECK(l > 4.0);
    CHECK(l <= std::sqrt(29.0) + 1e-9);
  }
}

TEST_CASE("quadratic spec validation") {
  auto spec = connectivity_game_spec();
  spec.couplings.push_back({0, 0});
  CHECK_THROWS_AS(validate(spec), ConfigError);
  spec = connectivity_game_spec();
  spec.couplings.push_back({0, 9});
  CHECK_THROWS_AS(validate(spec), ConfigError);
  const auto g = connectivity_game();
  CHECK_THROWS_AS(g.partial_gradient(0, Vec::Zero(3)), DimensionError);
}

TEST_CASE("registry") {
  auto& reg = GameRegistry::instance();
  CHECK(reg.contains("connectivity"));
  CHECK_FALSE(reg.contains("nope"));
  CHECK_THROWS_AS(reg.make("nope"), ConfigError);
  reg.add("test_square", [] {
    return scalar_game([](double x) { return x * x; }, [](double x) { return 2 * x; });
  });
  CHECK(reg.make("test_square").n_players() == 1);
}
