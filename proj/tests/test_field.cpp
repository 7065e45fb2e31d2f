#include <doctest.h>

#include <cmath>
#include <random>

#include "perihyp/field.hpp"
#include "perihyp/grid.hpp"

using namespace perihyp;

namespace {

Field smooth_random(PeriodicGrid g, int ncomp, unsigned seed, int modes = 5) {
  // Band-limited random field: a few trig modes in t times a polynomial in x.
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> at(modes), bt(modes), cx(4);
  Field f(g, ncomp);
  for (int c = 0; c < ncomp; ++c) {
    for (auto& v : at) v = dist(rng);
    for (auto& v : bt) v = dist(rng);
    for (auto& v : cx) v = dist(rng);
    for (int it = 0; it < g.nt; ++it)
      for (int ix = 0; ix < g.nx; ++ix) {
        const double t = g.t(it), x = g.x(ix);
        double tv = 0.0;
        for (int k = 0; k < modes; ++k) tv += at[k] * std::cos((k + 1) * t) + bt[k] * std::sin((k + 1) * t);
        const double xv = cx[0] + x * (cx[1] + x * (cx[2] + x * cx[3]));
        f.at(c, it, ix) = tv * xv;
      }
  }
  return f;
}

}  // namespace

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(PeriodicGrid(3, 8), std::invalid_argument);
  CHECK_THROWS_AS(PeriodicGrid(7, 8), std::invalid_argument);
  CHECK_THROWS_AS(PeriodicGrid(8, 1), std::invalid_argument);
  PeriodicGrid g(8, 5);
  CHECK(g.t(0) == 0.0);
  CHECK(g.x(4) == doctest::Approx(1.0));
}

TEST_CASE("shift by zero is bit-identical") {
  PeriodicGrid g(32, 9);
  Field f = smooth_random(g, 2, 7);
  Field s = f.shifted(0.0);
  for (int i = 0; i < f.size(); ++i) CHECK(s.raw()[i] == f.raw()[i]);
}

TEST_CASE("shift inverse returns the field") {
  PeriodicGrid g(64, 7);
  Field f = smooth_random(g, 1, 3);
  Field s = f.shifted(0.731).shifted(-0.731);
  CHECK(sup_distance(s, f) <= 1e-12);
}

TEST_CASE("shift of cos t by pi/2 gives -sin t") {
  PeriodicGrid g(32, 4);
  Field f = Field::from_function(g, 1, [](int, double t, double) { return std::cos(t); });
  Field s = f.shifted(M_PI / 2);
  double err = 0.0;
  for (int it = 0; it < g.nt; ++it)
    err = std::max(err, std::abs(s.at(0, it, 0) + std::sin(g.t(it))));
  CHECK(err <= 1e-12);
}

TEST_CASE("shift group law") {
  PeriodicGrid g(64, 5);
  Field f = smooth_random(g, 2, 11);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(-8.0, 8.0);
  for (int rep = 0; rep < 12; ++rep) {
    const double s1 = dist(rng), s2 = dist(rng);
    Field a = f.shifted(s1).shifted(s2);
    Field b = f.shifted(s1 + s2);
    CHECK(sup_distance(a, b) <= 1e-12);
  }
}

TEST_CASE("time derivative of constants and sines") {
  PeriodicGrid g(64, 3);
  Field c = Field::from_function(g, 1, [](int, double, double) { return 4.2; });
  CHECK(c.time_derivative(1).norm_sup() <= 1e-13);

  Field s = Field::from_function(g, 1, [](int, double t, double) { return std::sin(t); });
  Field d2 = s.time_derivative(2);
  double err = 0.0;
  for (int it = 0; it < g.nt; ++it)
    err = std::max(err, std::abs(d2.at(0, it, 0) + std::sin(g.t(it))));
  CHECK(err <= 1e-10);

  Field d0 = s.time_derivative(0);
  CHECK(sup_distance(d0, s) == 0.0);
  CHECK_THROWS_AS(s.time_derivative(g.nt / 2), std::invalid_argument);
}

TEST_CASE("derivative commutes with shift") {
  PeriodicGrid g(64, 6);
  Field f = smooth_random(g, 1, 21);
  Field a = f.shifted(1.234).time_derivative(1);
  Field b = f.time_derivative(1).shifted(1.234);
  CHECK(sup_distance(a, b) <= 1e-10);
}

TEST_CASE("norm_l examples and monotonicity") {
  PeriodicGrid g(128, 3);
  Field z(g, 2);
  CHECK(z.norm_l(3) == 0.0);

  Field s = Field::from_function(g, 1, [](int, double t, double) { return std::sin(t); });
  // Dense-sampling oracle: sup |sin| over the node set, plus sup |cos| for l=1.
  double sup0 = 0.0, sup1 = 0.0;
  for (int it = 0; it < g.nt; ++it) {
    sup0 = std::max(sup0, std::abs(std::sin(g.t(it))));
    sup1 = std::max(sup1, std::abs(std::cos(g.t(it))));
  }
  CHECK(std::abs(s.norm_l(0) - 1.0) <= 1e-3);
  CHECK(s.norm_l(0) == doctest::Approx(sup0).epsilon(1e-12));
  CHECK(std::abs(s.norm_l(1) - 2.0) <= 1e-3);
  CHECK(s.norm_l(1) == doctest::Approx(sup0 + sup1).epsilon(1e-10));

  Field f = smooth_random(g, 2, 31);
  for (int l = 0; l < 3; ++l) CHECK(f.norm_l(l + 1) >= f.norm_l(l));
}

TEST_CASE("eval reproduces stored values at nodes") {
  PeriodicGrid g(32, 9);
  Field f = smooth_random(g, 2, 13);
  for (int it = 0; it < g.nt; it += 5)
    for (int ix = 0; ix < g.nx; ix += 3)
      CHECK(f.eval(1, g.t(it), g.x(ix)) == doctest::Approx(f.at(1, it, ix)).epsilon(1e-13));
}

TEST_CASE("eval interpolates cos t * x") {
  PeriodicGrid g(64, 64);
  Field f = Field::from_function(g, 1, [](int, double t, double x) { return std::cos(t) * x; });
  CHECK(std::abs(f.eval(0, M_PI / 3, 0.5) - 0.25) <= 1e-8);
}

TEST_CASE("eval of t-independent field ignores t") {
  PeriodicGrid g(16, 8);
  Field f = Field::from_function(g, 1, [](int, double, double x) { return x * x; });
  CHECK(f.eval(0, 0.1, 0.3) == doctest::Approx(f.eval(0, 5.9, 0.3)).epsilon(1e-13));
  CHECK_THROWS_AS(f.eval(0, 0.0, 1.5), std::domain_error);
}
