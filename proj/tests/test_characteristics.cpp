#include <doctest.h>

#include <cmath>

#include "perihyp/characteristics.hpp"
#include "perihyp/errors.hpp"
#include "perihyp/problem.hpp"

using namespace perihyp;

namespace {

std::shared_ptr<FirstOrderProblem> scalar_problem(
    std::function<double(double x, double lambda)> a,
    std::function<double(double)> db_diag = nullptr) {
  return std::make_shared<FirstOrderProblem>(
      1, 1, [a](int, double x, double lambda) { return a(x, lambda); },
      [](int, double, double, double, std::span<const double> u) { return 0.5 * u[0] * u[0]; },
      [db_diag](int, int, double, double, double, std::span<const double> u) {
        return db_diag ? db_diag(u[0]) : u[0];
      },
      BoundaryCoupling::none(1, 1));
}

}  // namespace

TEST_CASE("tau with unit speed") {
  auto p = scalar_problem([](double, double) { return 1.0; });
  CHECK(tau(*p, 0, 0.0, 0.0, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("tau with speed 1+lambda^2") {
  auto p = scalar_problem([](double, double l) { return 1.0 + l * l; });
  // Closed form 1/(1+lambda^2) at lambda = 1.
  CHECK(std::abs(tau(*p, 0, 0.0, 0.0, 1.0, 1.0) - 0.5) <= 1e-12);
}

TEST_CASE("tau with speed 1/(1+x)") {
  auto p = scalar_problem([](double x, double) { return 1.0 / (1.0 + x); });
  // int_0^1 (1+eta) d eta = 1.5.
  CHECK(std::abs(tau(*p, 0.0, 0, 0.0, 1.0, 0.0) - 1.5) <= 1e-12);
}

TEST_CASE("travel_time examples") {
  auto p2 = scalar_problem([](double, double) { return 2.0; });
  CHECK(std::abs(travel_time(*p2, 0, 0.0, 1.0, 0.0) - 0.5) <= 1e-13);
  auto pl = scalar_problem([](double, double l) { return 1.0 + l * l; });
  CHECK(std::abs(travel_time(*pl, 0, 0.0, 1.0, 0.0) - 1.0) <= 1e-13);
  auto px = scalar_problem([](double x, double) { return 1.0 / (1.0 + x); });
  CHECK(std::abs(travel_time(*px, 0, 0.0, 1.0, 0.0) - 1.5) <= 1e-12);
}

TEST_CASE("tau is shift equivariant and monotone") {
  auto p = scalar_problem([](double x, double) { return 1.0 + 0.3 * std::sin(3.0 * x); });
  const double base = tau(*p, 0, 0.4, 0.2, 0.9, 0.0);
  // Exact up to one rounding of the final addition.
  CHECK(std::abs(tau(*p, 0, 0.4 + 1.7, 0.2, 0.9, 0.0) - (base + 1.7)) <= 1e-15);
  double prev = tau(*p, 0, 0.0, 0.3, 0.0, 0.0);
  for (int i = 1; i <= 10; ++i) {
    const double cur = tau(*p, 0, 0.0, 0.3, i / 10.0, 0.0);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("singular speed raises") {
  auto p = scalar_problem([](double, double) { return 1e-13; });
  CHECK_THROWS_AS(travel_time(*p, 0, 0.0, 1.0, 0.25), SingularSpeedError);
}

TEST_CASE("damping with zero diagonal coefficient is one") {
  auto p = std::make_shared<FirstOrderProblem>(
      1, 1, [](int, double, double) { return 1.0; },
      [](int, double, double, double, std::span<const double>) { return 0.0; },
      [](int, int, double, double, double, std::span<const double>) { return 0.0; },
      BoundaryCoupling::none(1, 1));
  PeriodicGrid g(16, 9);
  Field v(g, 1);
  CHECK(damping(*p, 0, 0.3, 0.1, 0.8, 0.0, v) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("damping with constant coefficients") {
  // d_{u} b = beta = 1, a = alpha = 1: c(t,0,1) = exp(1 * (1 - 0)) = e.
  auto p = std::make_shared<FirstOrderProblem>(
      1, 1, [](int, double, double) { return 1.0; },
      [](int, double, double, double, std::span<const double> u) { return u[0]; },
      [](int, int, double, double, double, std::span<const double>) { return 1.0; },
      BoundaryCoupling::none(1, 1));
  PeriodicGrid g(16, 9);
  Field v(g, 1);
  CHECK(std::abs(damping(*p, 0, 0.0, 0.0, 1.0, 0.0, v) - std::exp(1.0)) <= 1e-10);
}

TEST_CASE("damping cocycle and reversal") {
  auto p = std::make_shared<FirstOrderProblem>(
      1, 1, [](int, double x, double) { return 1.0 + 0.4 * x; },
      [](int, double t, double x, double, std::span<const double> u) {
        return std::sin(t) * (1.0 + x) * u[0];
      },
      [](int, int, double t, double x, double, std::span<const double>) {
        return std::sin(t) * (1.0 + x);
      },
      BoundaryCoupling::none(1, 1));
  PeriodicGrid g(32, 17);
  Field v = Field::from_function(g, 1, [](int, double t, double x) {
    return 0.3 * std::cos(t) + 0.2 * x;
  });
  const double t0 = 0.7, x = 0.1, xi = 0.55, zeta = 0.95;
  const double c1 = damping(*p, 0, t0, x, xi, 0.0, v);
  const double tmid = tau(*p, 0, t0, x, xi, 0.0);
  const double c2 = damping(*p, 0, tmid, xi, zeta, 0.0, v);
  const double c3 = damping(*p, 0, t0, x, zeta, 0.0, v);
  CHECK(std::abs(c1 * c2 - c3) / std::abs(c3) <= 1e-8);

  const double back = damping(*p, 0, tmid, xi, x, 0.0, v);
  CHECK(std::abs(c1 * back - 1.0) <= 1e-8);
}

TEST_CASE("char table agrees with direct quadrature") {
  auto p = scalar_problem([](double x, double) { return 1.0 / (1.0 + x); });
  CharTable table(*p, 0.0, LineQuadrature::for_grid(9));
  CHECK(std::abs(table.P_full(0) - 1.5) <= 1e-12);
  for (double x : {0.0, 0.131, 0.5, 0.875, 1.0}) {
    const double direct = travel_time(*p, 0, 0.0, x, 0.0);
    CHECK(std::abs(table.P(0, x) - direct) <= 1e-11);
  }
}
