#include <doctest.h>

#include <cmath>
#include <random>

#include "perihyp/operators.hpp"
#include "perihyp/presets.hpp"

using namespace perihyp;

namespace {

std::shared_ptr<FirstOrderProblem> transport_pair_unit() {
  // m = 1, n = 2, r12 = r21 = 1, b = 0, speeds +-1.
  return std::make_shared<FirstOrderProblem>(
      2, 1, [](int j, double, double) { return j == 0 ? 1.0 : -1.0; },
      [](int, double, double, double, std::span<const double>) { return 0.0; },
      [](int, int, double, double, double, std::span<const double>) { return 0.0; },
      BoundaryCoupling::reflection(2, 1,
                                   [](int j, int k, double, double) { return j != k ? 1.0 : 0.0; }));
}

Field smooth2(PeriodicGrid g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const double a1 = dist(rng), a2 = dist(rng), a3 = dist(rng), a4 = dist(rng);
  return Field::from_function(g, 2, [=](int c, double t, double x) {
    const double base = (c == 0) ? a1 * std::sin(t) + a2 * std::cos(2 * t)
                                 : a3 * std::cos(t) + a4 * std::sin(3 * t);
    return base * (0.3 + x * (1.0 - 0.4 * x));
  });
}

}  // namespace

TEST_CASE("apply_C vanishes for zero coupling") {
  auto p = std::make_shared<FirstOrderProblem>(
      2, 1, [](int j, double, double) { return j == 0 ? 1.0 : -1.0; },
      [](int, double, double, double, std::span<const double>) { return 0.0; },
      [](int, int, double, double, double, std::span<const double>) { return 0.0; },
      BoundaryCoupling::none(2, 1));
  PeriodicGrid g(32, 9);
  Field u = smooth2(g, 1);
  Field v(g, 2);
  OperatorSet ops(*p, 0.0, v);
  CHECK(ops.apply_C(u, v).norm_sup() <= 1e-14);
}

TEST_CASE("apply_C of the unit transport pair reproduces the boundary shift") {
  auto p = transport_pair_unit();
  PeriodicGrid g(64, 17);
  Field u = smooth2(g, 2);
  Field v(g, 2);
  OperatorSet ops(*p, 0.0, v);
  const Field cu = ops.apply_calC(u);
  double err = 0.0;
  for (int it = 0; it < g.nt; ++it)
    for (int ix = 0; ix < g.nx; ++ix) {
      // (Cu)_1(t,x) = u_2(t - x, 0), (Cu)_2(t,x) = u_1(t + x - 1, 1).
      const double want1 = u.eval(1, g.t(it) - g.x(ix), 0.0);
      const double want2 = u.eval(0, g.t(it) + g.x(ix) - 1.0, 1.0);
      err = std::max(err, std::abs(cu.at(0, it, ix) - want1));
      err = std::max(err, std::abs(cu.at(1, it, ix) - want2));
    }
  CHECK(err <= 1e-10);
}

TEST_CASE("apply_C with constant data sums the coupling") {
  auto p = transport_pair_unit();
  PeriodicGrid g(16, 7);
  Field u = Field::from_function(g, 2, [](int c, double, double) { return c == 0 ? 0.3 : -0.8; });
  Field v(g, 2);
  OperatorSet ops(*p, 0.0, v);
  const Field cu = ops.apply_calC(u);
  for (int ix = 0; ix < g.nx; ++ix) {
    CHECK(cu.at(0, 3, ix) == doctest::Approx(-0.8).epsilon(1e-12));
    CHECK(cu.at(1, 3, ix) == doctest::Approx(0.3).epsilon(1e-12));
  }
}

TEST_CASE("apply_D vanishes for zero source") {
  auto p = transport_pair_unit();
  PeriodicGrid g(32, 9);
  Field u = smooth2(g, 3);
  Field v(g, 2);
  OperatorSet ops(*p, 0.0, v);
  CHECK(ops.apply_D(u, v).norm_sup() <= 1e-13);
}

TEST_CASE("apply_D of the scalar transport matches the closed form") {
  const auto& preset = find_preset("remark-mn1");
  PeriodicGrid g(64, 33);
  Field zero(g, 1);
  Field v = Field::from_function(g, 1, [](int, double t, double x) {
    return 0.4 * std::sin(t) * x;  // arbitrary frozen argument
  });
  OperatorSet ops(*preset.first_order, 0.0, v);
  const Field d = ops.apply_D(zero, v);
  double err = 0.0;
  for (int it = 0; it < g.nt; ++it)
    for (int ix = 0; ix < g.nx; ++ix) {
      const double want = std::sin(g.t(it) - g.x(ix)) - std::sin(g.t(it));
      err = std::max(err, std::abs(d.at(0, it, ix) - want));
    }
  CHECK(err <= 1e-8);
}

TEST_CASE("diagonal of the source derivative cancels at u = v") {
  // For b_j depending only on u_j the frozen partial-integral operator is
  // strictly off-diagonal, so a single-component input keeps that component zero.
  auto p = std::make_shared<FirstOrderProblem>(
      2, 1, [](int j, double, double) { return j == 0 ? 1.0 : -1.0; },
      [](int j, double, double, double, std::span<const double> u) {
        return 0.5 * u[j] * u[j] + (j == 0 ? 0.2 * u[1] : 0.0);
      },
      [](int j, int k, double, double, double, std::span<const double> u) {
        if (j == k) return u[j];
        return (j == 0 && k == 1) ? 0.2 : 0.0;
      },
      BoundaryCoupling::none(2, 1));
  PeriodicGrid g(32, 9);
  Field u0 = smooth2(g, 4);
  OperatorSet ops(*p, 0.0, u0);
  Field only1 = Field::from_function(g, 2, [](int c, double t, double x) {
    return c == 0 ? std::cos(t) * (1.0 + x) : 0.0;
  });
  const Field dw = ops.apply_calD(only1);
  double comp0 = 0.0;
  for (int it = 0; it < g.nt; ++it)
    for (int ix = 0; ix < g.nx; ++ix) comp0 = std::max(comp0, std::abs(dw.at(0, it, ix)));
  CHECK(comp0 == 0.0);
}

TEST_CASE("apply_calD analytic example") {
  // b1 = u2, b2 = 0, speeds +-1, u0 = 0: (D w)_1(t,x) = -int_0^x w_2(t+xi-x, xi) dxi.
  auto p = std::make_shared<FirstOrderProblem>(
      2, 1, [](int j, double, double) { return j == 0 ? 1.0 : -1.0; },
      [](int j, double, double, double, std::span<const double> u) {
        return j == 0 ? u[1] : 0.0;
      },
      [](int j, int k, double, double, double, std::span<const double>) {
        return (j == 0 && k == 1) ? 1.0 : 0.0;
      },
      BoundaryCoupling::none(2, 1));
  PeriodicGrid g(32, 33);
  Field u0(g, 2);
  OperatorSet ops(*p, 0.0, u0);
  Field ones = Field::from_function(g, 2, [](int c, double, double) { return c == 1 ? 1.0 : 0.0; });
  const Field dw = ops.apply_calD(ones);
  double err = 0.0;
  for (int it = 0; it < g.nt; ++it)
    for (int ix = 0; ix < g.nx; ++ix)
      err = std::max(err, std::abs(dw.at(0, it, ix) + g.x(ix)));
  CHECK(err <= 1e-8);
}

TEST_CASE("calC and calD are linear") {
  const auto& preset = find_preset("mms-2x2");
  PeriodicGrid g(32, 9);
  Field u0 = smooth2(g, 5);
  OperatorSet ops(*preset.first_order, 0.0, u0);
  Field a = smooth2(g, 6), b = smooth2(g, 7);
  Field combo = a;
  combo *= 0.7;
  Field tmp = b;
  tmp *= -1.3;
  combo += tmp;

  for (auto apply : {&OperatorSet::apply_calC, &OperatorSet::apply_calD}) {
    Field lhs = (ops.*apply)(combo);
    Field rhs = (ops.*apply)(a);
    rhs *= 0.7;
    Field rb = (ops.*apply)(b);
    rb *= -1.3;
    rhs += rb;
    CHECK(sup_distance(lhs, rhs) <= 1e-12);
  }
}

TEST_CASE("frozen operators linearize C + D") {
  const auto& preset = find_preset("mms-2x2");
  PeriodicGrid g(32, 17);
  Field u0 = smooth2(g, 8);
  u0 *= 0.3;
  OperatorSet ops(*preset.first_order, 0.0, u0);
  Field w = smooth2(g, 9);
  const double eps = 1e-6;

  Field upert = w;
  upert *= eps;
  upert += u0;
  Field fd = ops.apply_calC(upert);
  fd += ops.apply_D(upert, u0);
  Field base = ops.apply_calC(u0);
  base += ops.apply_D(u0, u0);
  fd -= base;
  fd *= 1.0 / eps;

  Field lin = ops.apply_calC(w);
  lin += ops.apply_calD(w);
  CHECK(sup_distance(fd, lin) <= 5e-5);  // O(eps) with the second-derivative scale
}

TEST_CASE("residual vanishes on the manufactured solution") {
  const auto& preset = find_preset("mms-2x2");
  PeriodicGrid g(64, 33);
  Field ustar = Field::from_function(
      g, 2, [&](int c, double t, double x) { return preset.reference(c, t, x, 0.0); });
  Field u0(g, 2);
  OperatorSet ops(*preset.first_order, 0.0, u0);
  CHECK(ops.residual(ustar).norm_sup() <= 1e-6);

  // v-independence: any frozen argument annihilates the same solution.
  Field vprime = smooth2(g, 10);
  OperatorSet ops2(*preset.first_order, 0.0, vprime);
  CHECK(ops2.residual(ustar).norm_sup() <= 1e-6);
}

TEST_CASE("residual of the trivial homogeneous problem is zero") {
  auto p = transport_pair_unit();
  PeriodicGrid g(16, 5);
  Field zero(g, 2);
  OperatorSet ops(*p, 0.0, zero);
  CHECK(ops.residual(zero).norm_sup() == 0.0);
}

TEST_CASE("operators commute with time shifts for autonomous coefficients") {
  const auto& preset = find_preset("linear-2x2");
  PeriodicGrid g(64, 9);
  Field u0(g, 2);
  OperatorSet ops(*preset.first_order, 0.1, u0);
  Field u = smooth2(g, 11);
  const double s = 1.3;
  {
    Field lhs = ops.apply_calC(u.shifted(s));
    Field rhs = ops.apply_calC(u).shifted(s);
    CHECK(sup_distance(lhs, rhs) <= 1e-10);
  }
  {
    Field lhs = ops.apply_calD(u.shifted(s));
    Field rhs = ops.apply_calD(u).shifted(s);
    CHECK(sup_distance(lhs, rhs) <= 1e-10);
  }
}
