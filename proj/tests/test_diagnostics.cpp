#include <doctest.h>

#include <cmath>

#include "perihyp/characteristics.hpp"
#include "perihyp/diagnostics.hpp"
#include "perihyp/presets.hpp"
#include "perihyp/trig.hpp"

using namespace perihyp;

namespace {

std::shared_ptr<FirstOrderProblem> pair_with(
    std::function<double(int, double, double)> a,
    std::function<double(int, int, double, double, double)> db_coef, double r12, double r21) {
  // b_j linear in u_j with coefficient db_coef(j, j, t, x, lambda).
  return std::make_shared<FirstOrderProblem>(
      2, 1, std::move(a),
      [db_coef](int j, double t, double x, double lambda, std::span<const double> u) {
        return db_coef(j, j, t, x, lambda) * u[j];
      },
      [db_coef](int j, int k, double t, double x, double lambda, std::span<const double>) {
        return (j == k) ? db_coef(j, k, t, x, lambda) : 0.0;
      },
      BoundaryCoupling::reflection(2, 1, [r12, r21](int j, int k, double, double) {
        if (j == 0 && k == 1) return r12;
        if (j == 1 && k == 0) return r21;
        return 0.0;
      }));
}

}  // namespace

TEST_CASE("R and S vanish without coupling") {
  auto p = pair_with([](int j, double, double) { return j == 0 ? 1.0 : -1.0; },
                     [](int, int, double, double, double) { return 0.0; }, 0.0, 0.0);
  PeriodicGrid g(32, 9);
  Field u0(g, 2);
  auto [R, S] = nonresonance_RS(*p, u0);
  CHECK(R == 0.0);
  CHECK(S == 0.0);
}

TEST_CASE("R = S = 1 on the boundary of the contraction condition") {
  const auto& preset = find_preset("remark-rema");
  PeriodicGrid g(32, 9);
  Field u0(g, 2);
  auto [R, S] = nonresonance_RS(*preset.first_order, u0);
  CHECK(R == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(S == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("exponential damping enters R as exp(-1)") {
  // b0_1/a_1 - b0_2/a_2 = 1 with |r12 r21| = 1: the R integrand is -1.
  auto p = pair_with([](int j, double, double) { return j == 0 ? 1.0 : -1.0; },
                     [](int, int, double, double, double) { return 0.5; }, 1.0, 1.0);
  PeriodicGrid g(32, 9);
  Field u0(g, 2);
  auto [R, S] = nonresonance_RS(*p, u0);
  CHECK(R == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
  CHECK(S == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
}

TEST_CASE("R doubles when the coupling doubles") {
  auto p1 = pair_with([](int j, double, double) { return j == 0 ? 1.0 : -1.0; },
                      [](int, int, double t, double x, double) { return 0.2 * std::sin(t) * x; },
                      0.4, 0.5);
  auto p2 = pair_with([](int j, double, double) { return j == 0 ? 1.0 : -1.0; },
                      [](int, int, double t, double x, double) { return 0.2 * std::sin(t) * x; },
                      0.8, 0.5);
  PeriodicGrid g(32, 9);
  Field u0(g, 2);
  const double R1 = nonresonance_RS(*p1, u0).first;
  const double R2 = nonresonance_RS(*p2, u0).first;
  CHECK(R2 == doctest::Approx(2.0 * R1).epsilon(1e-10));
}

TEST_CASE("R0 and S0 profiles of the transport pair equal one") {
  const auto& preset = find_preset("remark-rema");
  PeriodicGrid g(32, 9);
  Field u0(g, 2);
  auto [R0, S0] = nonresonance_R0S0(*preset.first_order, u0);
  for (int i = 0; i < g.nt; ++i) {
    CHECK(R0[i] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(S0[i] == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("R0 with constant half coupling") {
  auto p = pair_with([](int j, double, double) { return j == 0 ? 1.0 : -1.0; },
                     [](int, int, double, double, double) { return 0.0; }, 0.5, 1.0);
  PeriodicGrid g(32, 9);
  Field u0(g, 2);
  auto [R0, S0] = nonresonance_R0S0(*p, u0);
  for (int i = 0; i < g.nt; ++i) CHECK(R0[i] == doctest::Approx(0.5).epsilon(1e-11));
}

TEST_CASE("R0 with time-dependent coupling matches the direct formula") {
  auto p = std::make_shared<FirstOrderProblem>(
      2, 1, [](int j, double, double) { return j == 0 ? 1.0 : -1.0; },
      [](int, double, double, double, std::span<const double>) { return 0.0; },
      [](int, int, double, double, double, std::span<const double>) { return 0.0; },
      BoundaryCoupling::reflection(2, 1, [](int j, int k, double t, double) {
        if (j == 0 && k == 1) return 1.0 + 0.1 * std::cos(t);
        if (j == 1 && k == 0) return 1.0;
        return 0.0;
      }));
  PeriodicGrid g(64, 9);
  Field u0(g, 2);
  auto [R0, S0] = nonresonance_R0S0(*p, u0);
  for (int i = 0; i < g.nt; ++i)
    CHECK(R0[i] == doctest::Approx(std::abs(1.0 + 0.1 * std::cos(g.t(i)))).epsilon(1e-10));
}

TEST_CASE("R0 agrees with the boundary damping product up to the argument shift") {
  // Second route: |c_12(t,1) c_21(tau_1(t,1,0), 0)| = R0(t - P_1(1)).
  auto p = std::make_shared<FirstOrderProblem>(
      2, 1, [](int j, double x, double) { return j == 0 ? 1.0 + 0.2 * x : -(1.3 - 0.2 * x); },
      [](int j, double t, double x, double, std::span<const double> u) {
        return (j == 0 ? (0.3 + 0.1 * std::sin(t)) * (1.0 + x) : 0.25 * std::cos(t)) * u[j];
      },
      [](int j, int k, double t, double x, double, std::span<const double>) {
        if (j != k) return 0.0;
        return j == 0 ? (0.3 + 0.1 * std::sin(t)) * (1.0 + x) : 0.25 * std::cos(t);
      },
      BoundaryCoupling::reflection(2, 1, [](int j, int k, double t, double) {
        if (j == 0 && k == 1) return 1.0 + 0.1 * std::cos(t);
        if (j == 1 && k == 0) return 0.8 + 0.05 * std::sin(t);
        return 0.0;
      }));
  PeriodicGrid g(64, 17);
  Field u0(g, 2);
  auto [R0, S0] = nonresonance_R0S0(*p, u0);

  const double P1 = travel_time(*p, 0, 0.0, 1.0, 0.0);
  const double P2 = travel_time(*p, 1, 0.0, 1.0, 0.0);
  for (int i = 0; i < g.nt; i += 7) {
    const double t = g.t(i);
    const double c12 = damping(*p, 0, t, 1.0, 0.0, 0.0, u0) *
                       p->coupling().r(0, 1, t - P1, 0.0);
    const double s = t - P1;
    const double c21 = damping(*p, 1, s, 0.0, 1.0, 0.0, u0) *
                       p->coupling().r(1, 0, s + P2, 0.0);
    const double lhs = std::abs(c12 * c21);
    const double rhs = trig::eval(R0, t - P1);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("wave R0 S0 for unit damping") {
  WaveProblem w;
  w.a = [](double, double) { return 1.0; };
  w.dxa = [](double, double) { return 0.0; };
  w.b = [](double t, double, double, double, double p, double) { return p + std::cos(t); };
  w.d4b = [](double, double, double, double, double, double) { return 0.0; };
  w.d5b = [](double, double, double, double, double, double) { return 1.0; };
  w.d6b = [](double, double, double, double, double, double) { return 0.0; };
  PeriodicGrid g(32, 17);
  Field u0(g, 1);
  auto [R0, S0] = wave_R0S0(w, u0);
  for (int i = 0; i < g.nt; ++i) {
    CHECK(R0[i] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(S0[i] == doctest::Approx(2.0).epsilon(1e-10));
  }
}

TEST_CASE("wave R0 S0 vanish without damping") {
  WaveProblem w;
  w.a = [](double, double) { return 1.0; };
  w.dxa = [](double, double) { return 0.0; };
  w.b = [](double t, double, double, double, double, double) { return std::cos(t); };
  w.d4b = w.d5b = w.d6b = [](double, double, double, double, double, double) { return 0.0; };
  PeriodicGrid g(32, 17);
  Field u0(g, 1);
  auto [R0, S0] = wave_R0S0(w, u0);
  for (int i = 0; i < g.nt; ++i) {
    CHECK(std::abs(R0[i]) <= 1e-12);
    CHECK(std::abs(S0[i]) <= 1e-12);
  }
}

TEST_CASE("telegraph check values") {
  {
    const auto& preset = find_preset("telegraph");
    CHECK(std::abs(telegraph_check(*preset.wave) - 2.0) <= 1e-10);
  }
  {
    WaveProblem w;
    w.a = [](double x, double) { return 1.0 + x; };
    w.dxa = [](double, double) { return 1.0; };
    w.b = [](double, double, double, double, double p, double) { return p; };
    w.d4b = w.d6b = [](double, double, double, double, double, double) { return 0.0; };
    w.d5b = [](double, double, double, double, double, double) { return 1.0; };
    CHECK(std::abs(telegraph_check(w) - 2.0 * std::log(2.0)) <= 1e-10);
  }
}

TEST_CASE("bc contraction check") {
  PeriodicGrid g(32, 9);
  Field u0(g, 2);
  {
    auto p = pair_with([](int j, double, double) { return j == 0 ? 1.0 : -1.0; },
                       [](int, int, double, double, double) { return 0.0; }, 0.0, 0.0);
    const auto rep = bc_contraction_check(*p, u0);
    CHECK(rep.passed);
    CHECK(rep.row_sums_ok);
  }
  {
    // Row sums 0.9 and damping signs aligned with the characteristics.
    auto p = pair_with([](int j, double, double) { return j == 0 ? 1.0 : -1.0; },
                       [](int j, int, double, double, double) { return j == 0 ? 0.4 : 0.3; },
                       0.9, 0.9);
    const auto rep = bc_contraction_check(*p, u0);
    CHECK(rep.passed);
    CHECK(rep.sign_condition_ok);  // +0.4/1 > 0 and 0.3/(-1) < 0
  }
  {
    auto p = pair_with([](int j, double, double) { return j == 0 ? 1.0 : -1.0; },
                       [](int, int, double, double, double) { return 0.0; }, 1.1, 0.9);
    const auto rep = bc_contraction_check(*p, u0);
    CHECK_FALSE(rep.passed);
    CHECK(rep.worst_row == 0);
    CHECK(rep.row_sums[0] == doctest::Approx(1.1));
  }
}

TEST_CASE("coercivity of the identity operator") {
  auto p = pair_with([](int j, double, double) { return j == 0 ? 1.0 : -1.0; },
                     [](int, int, double, double, double) { return 0.0; }, 0.0, 0.0);
  PeriodicGrid g(8, 5);
  Field u0(g, 2);
  const auto rep = coercivity(*p, 0.0, u0);
  CHECK(rep.sigma_min == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(rep.kernel_dim == 0);
}

TEST_CASE("coercivity detects the resonant kernel") {
  const auto& preset = find_preset("remark-rema");
  PeriodicGrid g(16, 9);
  Field u0(g, 2);
  const double lambda_star = std::sqrt(M_PI - 1.0);
  const auto rep = coercivity(*preset.first_order, lambda_star, u0);
  CHECK(rep.kernel_dim >= 1);
  CHECK_THROWS(coercivity(*preset.first_order, 0.0, Field(PeriodicGrid(32, 9), 2)));
}

TEST_CASE("resonance scan flags the degenerate parameter") {
  const auto& preset = find_preset("remark-rema");
  PeriodicGrid g(64, 9);
  Field u0(g, 2);
  const auto table = resonance_scan(*preset.first_order, u0, 1.3, 1.6, 64);
  REQUIRE(table.rows.size() == 65);
  const double lambda_star = std::sqrt(M_PI - 1.0);
  bool near_flagged = false;
  double multiplier_at_near = 1.0;
  for (const auto& row : table.rows) {
    CHECK(row.R == doctest::Approx(1.0).epsilon(1e-8));
    if (std::abs(row.lambda - lambda_star) <= 0.01 && row.flagged()) near_flagged = true;
    if (std::abs(row.lambda - lambda_star) <= 0.01 && row.min_mode_multiplier)
      multiplier_at_near = std::min(multiplier_at_near, *row.min_mode_multiplier);
  }
  CHECK(near_flagged);
  CHECK(multiplier_at_near <= 0.05);  // the mode multiplier dips near resonance
}

TEST_CASE("resonance scan of a contraction problem stays clean") {
  const auto& preset = find_preset("linear-2x2");
  PeriodicGrid g(32, 9);
  Field u0(g, 2);
  const auto table = resonance_scan(*preset.first_order, u0, -0.2, 0.2, 8);
  for (const auto& row : table.rows) {
    CHECK_FALSE(row.flagged());
    CHECK(row.R < 0.95);
  }
  const auto single = resonance_scan(*preset.first_order, u0, 0.1, 0.1, 1);
  CHECK(single.rows.size() == 2);
}

TEST_CASE("derivative consistency accepts correct partials") {
  auto p = std::make_shared<FirstOrderProblem>(
      2, 1, [](int j, double, double) { return j == 0 ? 1.0 : -1.0; },
      [](int j, double, double, double, std::span<const double> u) {
        return j == 0 ? u[0] * u[0] : std::sin(u[0] * u[1]);
      },
      [](int j, int k, double, double, double, std::span<const double> u) {
        if (j == 0) return k == 0 ? 2.0 * u[0] : 0.0;
        const double c = std::cos(u[0] * u[1]);
        return k == 0 ? c * u[1] : c * u[0];
      },
      BoundaryCoupling::none(2, 1));
  const auto rep = derivative_consistency(*p);
  CHECK(rep.passed);
  CHECK(rep.max_rel_error <= 1e-6);
}

TEST_CASE("derivative consistency flags a wrong sign") {
  auto p = std::make_shared<FirstOrderProblem>(
      1, 1, [](int, double, double) { return 1.0; },
      [](int, double, double, double, std::span<const double> u) { return u[0] * u[0]; },
      [](int, int, double, double, double, std::span<const double> u) { return -2.0 * u[0]; },
      BoundaryCoupling::none(1, 1));
  CHECK_FALSE(derivative_consistency(*p).passed);
}

TEST_CASE("derivative consistency for wave problems") {
  const auto& preset = find_preset("wave-mms");
  CHECK(derivative_consistency(*preset.wave).passed);
}
