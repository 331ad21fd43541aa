#include <doctest.h>

#include <cmath>

#include "antilinear/error.hpp"
#include "antilinear/numerics.hpp"
#include "oracles.hpp"

using namespace antilinear;
using namespace antilinear::numerics;

namespace {

constexpr cplx kI{0.0, 1.0};

CoefficientFunction fn(std::function<cplx(double)> f) { return CoefficientFunction(std::move(f)); }

}  // namespace

TEST_CASE("grid geometry") {
  const Grid g(2.0, 4);
  CHECK(g.step() == 0.5);
  CHECK(g.node_count() == 5);
  CHECK(g.refined_count() == 9);
  CHECK(g.refined_x(0) == 0.0);
  CHECK(g.refined_x(8) == 2.0);
  CHECK(g.node_x(2) == 1.0);
  CHECK_THROWS_AS(Grid(0.0, 10), InputError);
  CHECK_THROWS_AS(Grid(-1.0, 10), InputError);
  CHECK_THROWS_AS(Grid(1.0, 0), InputError);
  CHECK_THROWS_AS(Grid(std::nan(""), 10), InputError);
}

TEST_CASE("sampling rejects non-finite coefficients") {
  const Grid g(1.0, 10);
  CHECK_THROWS_AS(fn([](double x) { return cplx{1.0 / (x - 0.5), 0.0}; }).sample(g), InputError);
}

TEST_CASE("cumulative integral exactness") {
  const Grid g(1.0, 10);
  const Trajectory zero = cumulative_integral(CoefficientFunction::constant(0.0), g);
  for (std::size_t k = 0; k < zero.size(); ++k) CHECK(zero[k] == cplx{});

  const Trajectory one = cumulative_integral(CoefficientFunction::constant(1.0), g);
  for (std::size_t k = 0; k < one.size(); ++k) CHECK(std::abs(one[k] - g.refined_x(k)) <= 1e-15);

  const Trajectory sq = cumulative_integral(fn([](double x) { return cplx{x * x, 0.0}; }), g);
  CHECK(std::abs(sq.back() - 1.0 / 3.0) <= 1e-14);

  // Cubics are exact at full nodes; the half-node rule is exact through quadratics.
  const Trajectory cube = cumulative_integral(fn([](double x) { return cplx{x * x * x, 2.0 * x}; }), g);
  for (std::size_t j = 0; j < g.node_count(); ++j) {
    const double x = g.node_x(j);
    CHECK(std::abs(cube.node(0, j) - cplx{std::pow(x, 4) / 4.0, x * x}) <= 1e-15);
  }
  const Trajectory quad = cumulative_integral(fn([](double x) { return cplx{3.0 * x * x, 1.0 - x}; }), g);
  for (std::size_t k = 0; k < quad.size(); ++k) {
    const double x = g.refined_x(k);
    CHECK(std::abs(quad[k] - cplx{x * x * x, x - x * x / 2.0}) <= 1e-15);
  }
}

TEST_CASE("cumulative integral converges at fourth order") {
  const auto err = [](std::size_t n) {
    const Grid g(1.0, n);
    const Trajectory t = cumulative_integral(fn([](double x) { return std::exp(kI * 3.0 * x); }), g);
    double e = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
      const double x = g.refined_x(k);
      e = std::max(e, std::abs(t[k] - (std::exp(kI * 3.0 * x) - 1.0) / (3.0 * kI)));
    }
    return e;
  };
  const double ratio = err(20) / err(40);
  CHECK(ratio > 14.0);
  CHECK(ratio < 18.0);
}

TEST_CASE("reverse summation matches forward integral") {
  const Grid g(1.0, 100);
  const Trajectory f = fn([](double x) { return std::exp(kI * x) * (1.0 + x); }).sample(g);
  CHECK(std::abs(reverse_summed_integral(f) - cumulative_integral(f).back()) <= 1e-14);
}

TEST_CASE("differentiation") {
  const Grid g(1.0, 50);
  const Trajectory u = fn([](double x) { return cplx{x * x, -3.0 * x}; }).sample(g);
  const Trajectory d = differentiate(u);
  for (std::size_t k = 0; k < d.size(); ++k) CHECK(std::abs(d[k] - cplx{2.0 * g.refined_x(k), -3.0}) <= 1e-12);
}

TEST_CASE("linear system integrator") {
  const Grid g(1.0, 1000);
  SUBCASE("zero matrix keeps the state") {
    const Trajectory u = integrate_linear_system([](double) { return Mat2{}; }, std::nullopt, {1.0, 2.0 * kI}, g);
    for (std::size_t k = 0; k < u.size(); ++k) {
      CHECK(u.at(0, k) == cplx{1.0, 0.0});
      CHECK(u.at(1, k) == cplx{0.0, 2.0});
    }
  }
  SUBCASE("diagonal exponentials") {
    const Trajectory u = integrate_linear_system([](double) { return Mat2{1.0, 0.0, 0.0, -1.0}; }, std::nullopt,
                                                 {1.0, 1.0}, g);
    CHECK(std::abs(u.back(0) - std::exp(1.0)) <= 1e-8);
    CHECK(std::abs(u.back(1) - std::exp(-1.0)) <= 1e-8);
  }
  SUBCASE("antidiagonal rotation") {
    const Trajectory u = integrate_linear_system([](double) { return Mat2{0.0, kI, kI, 0.0}; }, std::nullopt,
                                                 {1.0, 0.0}, g);
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double x = g.refined_x(k);
      CHECK(std::abs(u.at(0, k) - std::cos(x)) <= 1e-8);
      CHECK(std::abs(u.at(1, k) - kI * std::sin(x)) <= 1e-8);
    }
  }
  SUBCASE("forced and variable, against the oracle") {
    const auto m = [](double x) { return Mat2{kI * x, 1.0 + x, std::cos(x), -0.5}; };
    const auto f = [](double x) { return Vec2{std::sin(x), kI}; };
    const Trajectory u = integrate_linear_system(m, f, {0.3, -0.2}, g);
    const auto ref = oracle::system([&](double x) { const Mat2 a = m(x); return oracle::M2{a.a11, a.a12, a.a21, a.a22}; },
                                    [&](double x) { const Vec2 v = f(x); return oracle::V2{v[0], v[1]}; },
                                    {0.3, -0.2}, 1.0, 1000, 4);
    for (std::size_t j = 0; j < g.node_count(); ++j) {
      CHECK(std::abs(u.node(0, j) - ref[j][0]) <= 1e-10);
      CHECK(std::abs(u.node(1, j) - ref[j][1]) <= 1e-10);
    }
  }
  SUBCASE("tabulated overload agrees with the function overload") {
    const auto m = [](double x) { return Mat2{0.0, std::exp(kI * x), std::exp(-kI * x), 0.0}; };
    std::vector<Mat2> tab(g.refined_count());
    for (std::size_t k = 0; k < tab.size(); ++k) tab[k] = m(g.refined_x(k));
    const Trajectory a = integrate_linear_system(m, std::nullopt, {1.0, 0.5}, g);
    const Trajectory b = integrate_linear_system(tab, {}, {1.0, 0.5}, g);
    CHECK(max_abs_diff(a, b) == 0.0);
  }
  SUBCASE("blow-up is a solver error naming the node") {
    const Grid coarse(10.0, 10);
    try {
      integrate_linear_system([](double) { return Mat2{1e200, 0.0, 0.0, 0.0}; }, std::nullopt, {1.0, 0.0}, coarse);
      FAIL("expected SolverError");
    } catch (const SolverError& e) {
      REQUIRE(e.where().has_value());
      CHECK(*e.where() > 0.0);
    }
  }
}

TEST_CASE("propagated fundamental matrix") {
  const Grid g(1.0, 1000);
  const Mat2 a{0.2, 1.0, -1.0, 0.1};
  const Mat2 p = propagate_fundamental([&](double) { return a; }, g);
  const oracle::M2 e = oracle::expm({a.a11, a.a12, a.a21, a.a22}, 1.0);
  CHECK(std::abs(p.a11 - e[0]) <= 1e-10);
  CHECK(std::abs(p.a12 - e[1]) <= 1e-10);
  CHECK(std::abs(p.a21 - e[2]) <= 1e-10);
  CHECK(std::abs(p.a22 - e[3]) <= 1e-10);
}

TEST_CASE("convergence order") {
  SUBCASE("diagonal exponential is fourth order") {
    const ConvergenceReport r = convergence_study(
        [](const Grid& g) {
          const Trajectory u = integrate_linear_system([](double) { return Mat2{1.0, 0.0, 0.0, -1.0}; }, std::nullopt,
                                                       {1.0, 1.0}, g);
          return std::max(std::abs(u.back(0) - std::exp(1.0)), std::abs(u.back(1) - std::exp(-1.0)));
        },
        1.0, 20);
    CHECK_FALSE(r.exact);
    CHECK(r.min_order() >= 3.8);
    for (double o : r.orders) CHECK(o <= 4.2);
  }
  SUBCASE("zero error is exact") {
    const ConvergenceReport r = convergence_study([](const Grid&) { return 0.0; }, 1.0, 20);
    CHECK(r.exact);
  }
  SUBCASE("order from explicit errors") {
    const std::vector<double> h{0.1, 0.05, 0.025};
    const std::vector<double> e{1e-4, 6.25e-6, 3.90625e-7};
    const ConvergenceReport r = convergence_order(h, e);
    CHECK(r.orders.size() == 2);
    CHECK(r.min_order() == doctest::Approx(4.0));
  }
}
