#include <doctest.h>

#include <cmath>

#include "perihyp/config.hpp"
#include "perihyp/errors.hpp"
#include "perihyp/expressions.hpp"

using namespace perihyp;
using json = nlohmann::ordered_json;

TEST_CASE("expression parsing and evaluation") {
  const std::vector<std::string> vars = {"t", "x", "lambda", "u1"};
  auto e = Expression::parse("sin(t) + 2*x^2 - lambda/(1 + u1)", vars);
  const double vals[4] = {0.5, 2.0, 3.0, 0.5};
  CHECK(e.eval(vals) == doctest::Approx(std::sin(0.5) + 8.0 - 2.0));
  CHECK(e.uses(0));
  CHECK(e.uses(3));

  auto c = Expression::parse("cos(pi)", vars);
  CHECK(c.eval(vals) == doctest::Approx(-1.0));
  auto neg = Expression::parse("-x^2", vars);
  CHECK(neg.eval(vals) == doctest::Approx(-4.0));

  CHECK_THROWS_AS(Expression::parse("sin(t", vars), ConfigError);
  CHECK_THROWS_AS(Expression::parse("t + y", vars), ConfigError);
  CHECK_THROWS_AS(Expression::parse("tan(t)", vars), ConfigError);
}

TEST_CASE("minimal preset config gets defaults") {
  json j = {{"command", "solve"}, {"problem", {{"preset", "remark-mn1"}}}};
  const RunConfig c = parse_config(j);
  CHECK(c.nt == 128);
  CHECK(c.nx == 128);
  CHECK(c.tol == 1e-8);
  CHECK(c.command == "solve");
  CHECK_FALSE(c.hash().empty());
}

TEST_CASE("config rejections") {
  CHECK_THROWS_AS(parse_config(json{{"problem", {{"preset", "remark-mn1"}}}, {"grid", {{"nt", -4}}}}),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config(json{{"problem", {{"preset", "remark-mn1"}}},
                        {"lambda_range", {{"min", 0.0}, {"max", 1.0}, {"steps", 0}}}}),
      ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"problem", {{"preset", "remark-mn1"}}}, {"bogus", 1}}),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"problem", {{"preset", "unknown"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"command", "fly"}, {"problem", {{"preset", "remark-mn1"}}}}),
                  ConfigError);
}

TEST_CASE("expression-defined first-order problem") {
  json spec = {{"type", "first-order"},
               {"n", 2},
               {"m", 1},
               {"a", {"1 + lambda^2", "-(1 + lambda^2)"}},
               {"b", {"0.4*u1^3 + 0.3*u2", "0.3*u1"}},
               {"db", json::array({json::array({"1.2*u1^2", "0.3"}),
                                   json::array({"0.3", "0"})})},
               {"coupling",
                {{"kind", "reflection"},
                 {"r", json::array({json::array({"0", "0.5"}),
                                    json::array({"0.7", "0"})})}}}};
  const BuiltProblem bp = build_problem(spec);
  REQUIRE(bp.transport);
  CHECK(bp.transport->dim() == 2);
  CHECK(bp.transport->speed(0, 0.5, 1.0) == doctest::Approx(2.0));
  CHECK(bp.transport->speed(1, 0.5, 1.0) == doctest::Approx(-2.0));
  std::vector<double> u{0.5, -1.0};
  StatePoint sp{u, {}};
  CHECK(bp.transport->source(0, 0.0, 0.0, 0.0, sp) == doctest::Approx(0.4 * 0.125 - 0.3));
  CHECK(bp.transport->coupling().r(0, 1, 0.1, 0.0) == doctest::Approx(0.5));

  // db required when b depends on the state.
  json bad = spec;
  bad.erase("db");
  CHECK_THROWS_AS(build_problem(bad), ConfigError);
}

TEST_CASE("expression-defined wave problem") {
  json spec = {{"type", "wave"},  {"a", "1"},   {"dxa", "0"}, {"b", "p + 0.2*cos(t)"},
               {"d4b", "0"},      {"d5b", "1"}, {"d6b", "0"}};
  const BuiltProblem bp = build_problem(spec);
  REQUIRE(bp.wave);
  REQUIRE(bp.transport);
  CHECK(bp.wave->b(0.0, 0.0, 0.0, 0.0, 1.5, 0.0) == doctest::Approx(1.7));
  CHECK(bp.transport->dim() == 2);
}

TEST_CASE("canonical form is stable under key order") {
  json a = {{"command", "solve"}, {"problem", {{"preset", "remark-mn1"}}}, {"tol", 1e-6}};
  json b = {{"tol", 1e-6}, {"problem", {{"preset", "remark-mn1"}}}, {"command", "solve"}};
  CHECK(parse_config(a).hash() == parse_config(b).hash());
}
