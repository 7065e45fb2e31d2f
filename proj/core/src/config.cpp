#include "perihyp/config.hpp"

#include <fstream>
#include <set>

#include "perihyp/errors.hpp"
#include "perihyp/expressions.hpp"
#include "perihyp/wave.hpp"

namespace perihyp {

using json = nlohmann::ordered_json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

const std::set<std::string> kCommands = {"solve",         "wave-solve",       "continue",
                                         "scan-resonance", "probe-smoothness", "diagnose"};

std::vector<std::string> fo_vars(int n) {
  std::vector<std::string> v = {"t", "x", "lambda"};
  for (int c = 1; c <= n; ++c) v.push_back("u" + std::to_string(c));
  return v;
}

/// A coefficient given either as an expression string or as a tabulated
/// uniform grid, wrapped into an evaluator closure.
Expression parse_expr_field(const json& j, const std::string& where,
                            std::span<const std::string> vars) {
  if (!j.is_string()) throw ConfigError(where + ": expected an expression string");
  return Expression::parse(j.get<std::string>(), vars);
}

}  // namespace

json RunConfig::canonical() const {
  json j;
  j["command"] = command;
  j["problem"] = problem;
  j["grid"] = {{"nt", nt}, {"nx", nx}};
  if (lambda_range)
    j["lambda_range"] = {{"min", lambda_range->min},
                         {"max", lambda_range->max},
                         {"steps", lambda_range->steps}};
  else
    j["lambda"] = lambda;
  j["tol"] = tol;
  j["max_iter"] = max_iter;
  j["probe_order"] = probe_order;
  j["continue_past_failures"] = continue_past_failures;
  if (!seed.empty()) j["seed"] = seed;
  return j;
}

std::string RunConfig::hash() const {
  const std::string s = canonical().dump();
  // FNV-1a 64.
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig parse_config(const json& j) {
  reject_unknown(j,
                 {"command", "problem", "grid", "lambda", "lambda_range", "tol", "max_iter",
                  "probe_order", "continue_past_failures", "seed", "out"},
                 "config");
  RunConfig c;
  if (j.contains("command")) {
    c.command = j.at("command").get<std::string>();
    if (!kCommands.count(c.command)) throw ConfigError("unknown command '" + c.command + "'");
  }
  if (!j.contains("problem")) throw ConfigError("config requires a 'problem' entry");
  c.problem = j.at("problem");
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    reject_unknown(g, {"nt", "nx"}, "grid");
    if (g.contains("nt")) c.nt = g.at("nt").get<int>();
    if (g.contains("nx")) c.nx = g.at("nx").get<int>();
  }
  try {
    (void)PeriodicGrid(c.nt, c.nx);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  if (j.contains("lambda")) c.lambda = j.at("lambda").get<double>();
  if (j.contains("lambda_range")) {
    const auto& r = j.at("lambda_range");
    reject_unknown(r, {"min", "max", "steps"}, "lambda_range");
    LambdaRange lr;
    lr.min = r.at("min").get<double>();
    lr.max = r.at("max").get<double>();
    lr.steps = r.at("steps").get<int>();
    if (lr.steps < 1) throw ConfigError("lambda_range: steps must be >= 1");
    if (!(lr.max >= lr.min)) throw ConfigError("lambda_range: need max >= min");
    c.lambda_range = lr;
  }
  if (j.contains("tol")) {
    c.tol = j.at("tol").get<double>();
    if (!(c.tol > 0.0)) throw ConfigError("tol must be positive");
  }
  if (j.contains("max_iter")) {
    c.max_iter = j.at("max_iter").get<int>();
    if (c.max_iter < 1) throw ConfigError("max_iter must be >= 1");
  }
  if (j.contains("probe_order")) {
    c.probe_order = j.at("probe_order").get<int>();
    if (c.probe_order < 1) throw ConfigError("probe_order must be >= 1");
  }
  if (j.contains("continue_past_failures"))
    c.continue_past_failures = j.at("continue_past_failures").get<bool>();
  if (j.contains("seed")) {
    const std::vector<std::string> txl = {"t", "x", "lambda"};
    for (const auto& e : j.at("seed")) {
      c.seed.push_back(e.get<std::string>());
      (void)Expression::parse(c.seed.back(), txl);  // syntax check
    }
  }
  if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
  (void)build_problem(c.problem);  // validate the problem spec eagerly
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config parse error in '" + path + "': " + e.what());
  }
  return parse_config(j);
}

namespace {

BuiltProblem build_first_order(const json& spec) {
  reject_unknown(spec, {"type", "n", "m", "a", "b", "db", "coupling"}, "problem");
  const int n = spec.at("n").get<int>();
  const int m = spec.at("m").get<int>();
  if (n < 1 || m < 0 || m > n) throw ConfigError("problem: need n >= 1 and 0 <= m <= n");
  if (n > 12) throw ConfigError("problem: expression-defined systems support n <= 12");
  const std::vector<std::string> vars = fo_vars(n);
  const std::vector<std::string> xl = {"x", "lambda"};
  const std::vector<std::string> tl = {"t", "lambda"};

  auto speeds = std::make_shared<std::vector<Expression>>();
  for (const auto& e : spec.at("a")) speeds->push_back(parse_expr_field(e, "a", xl));
  if (static_cast<int>(speeds->size()) != n) throw ConfigError("problem: 'a' needs n entries");

  auto bs = std::make_shared<std::vector<Expression>>();
  for (const auto& e : spec.at("b")) bs->push_back(parse_expr_field(e, "b", vars));
  if (static_cast<int>(bs->size()) != n) throw ConfigError("problem: 'b' needs n entries");

  auto dbs = std::make_shared<std::vector<Expression>>();
  if (spec.contains("db")) {
    for (const auto& row : spec.at("db"))
      for (const auto& e : row) dbs->push_back(parse_expr_field(e, "db", vars));
    if (static_cast<int>(dbs->size()) != n * n)
      throw ConfigError("problem: 'db' needs an n x n table");
  } else {
    // Default zero derivative table is legal only for state-independent b.
    for (int j = 0; j < n; ++j)
      for (size_t v = 3; v < vars.size(); ++v)
        if ((*bs)[j].uses(v))
          throw ConfigError("problem: 'db' is required when b depends on the state");
    for (int j = 0; j < n * n; ++j) dbs->push_back(Expression::parse("0", vars));
  }

  BoundaryCoupling coupling = BoundaryCoupling::none(n, m);
  if (spec.contains("coupling")) {
    const auto& cj = spec.at("coupling");
    reject_unknown(cj, {"kind", "r", "r00", "r01", "r10", "r11"}, "coupling");
    const std::string kind = cj.value("kind", "reflection");
    auto parse_matrix = [&](const json& mj, const std::string& where) {
      auto entries = std::make_shared<std::vector<Expression>>();
      for (const auto& row : mj)
        for (const auto& e : row) entries->push_back(parse_expr_field(e, where, tl));
      if (static_cast<int>(entries->size()) != n * n)
        throw ConfigError(where + " needs an n x n table");
      return entries;
    };
    auto matrix_entry = [n](std::shared_ptr<std::vector<Expression>> entries) {
      return [entries, n](int j, int k, double t, double lambda) {
        const double vals[2] = {t, lambda};
        return (*entries)[j * n + k].eval(vals);
      };
    };
    if (kind == "reflection") {
      coupling = BoundaryCoupling::reflection(n, m, matrix_entry(parse_matrix(cj.at("r"), "r")));
    } else if (kind == "general") {
      coupling = BoundaryCoupling::general(
          n, m, matrix_entry(parse_matrix(cj.at("r00"), "r00")),
          matrix_entry(parse_matrix(cj.at("r01"), "r01")),
          matrix_entry(parse_matrix(cj.at("r10"), "r10")),
          matrix_entry(parse_matrix(cj.at("r11"), "r11")));
    } else {
      throw ConfigError("coupling kind must be 'reflection' or 'general'");
    }
  }

  BuiltProblem out;
  out.name = "first-order";
  out.transport = std::make_shared<FirstOrderProblem>(
      n, m,
      [speeds](int j, double x, double lambda) {
        const double vals[2] = {x, lambda};
        return (*speeds)[j].eval(vals);
      },
      [bs, n](int j, double t, double x, double lambda, std::span<const double> u) {
        double vals[16] = {t, x, lambda};
        for (int c = 0; c < n; ++c) vals[3 + c] = u[c];
        return (*bs)[j].eval(std::span<const double>(vals, 3 + n));
      },
      [dbs, n](int j, int k, double t, double x, double lambda, std::span<const double> u) {
        double vals[16] = {t, x, lambda};
        for (int c = 0; c < n; ++c) vals[3 + c] = u[c];
        return (*dbs)[j * n + k].eval(std::span<const double>(vals, 3 + n));
      },
      std::move(coupling));
  return out;
}

BuiltProblem build_wave(const json& spec) {
  reject_unknown(spec, {"type", "a", "dxa", "b", "d4b", "d5b", "d6b"}, "problem");
  const std::vector<std::string> xl = {"x", "lambda"};
  const std::vector<std::string> vars = {"t", "x", "lambda", "u", "p", "q"};
  auto ax = std::make_shared<Expression>(parse_expr_field(spec.at("a"), "a", xl));
  auto dxax = std::make_shared<Expression>(parse_expr_field(spec.at("dxa"), "dxa", xl));
  auto parse_src = [&](const char* key) {
    return std::make_shared<Expression>(parse_expr_field(spec.at(key), key, vars));
  };
  auto bb = parse_src("b");
  auto d4 = parse_src("d4b");
  auto d5 = parse_src("d5b");
  auto d6 = parse_src("d6b");
  auto mk = [](std::shared_ptr<Expression> e) {
    return [e](double t, double x, double lambda, double u, double p, double q) {
      const double vals[6] = {t, x, lambda, u, p, q};
      return e->eval(vals);
    };
  };
  WaveProblem w;
  w.a = [ax](double x, double lambda) {
    const double vals[2] = {x, lambda};
    return ax->eval(vals);
  };
  w.dxa = [dxax](double x, double lambda) {
    const double vals[2] = {x, lambda};
    return dxax->eval(vals);
  };
  w.b = mk(bb);
  w.d4b = mk(d4);
  w.d5b = mk(d5);
  w.d6b = mk(d6);
  BuiltProblem out;
  out.name = "wave";
  out.wave = std::make_shared<WaveProblem>(std::move(w));
  out.transport = as_first_order(*out.wave);
  return out;
}

}  // namespace

BuiltProblem build_problem(const json& spec) {
  if (!spec.is_object()) throw ConfigError("problem: expected an object");
  if (spec.contains("preset")) {
    reject_unknown(spec, {"preset"}, "problem");
    const Preset& p = find_preset(spec.at("preset").get<std::string>());
    BuiltProblem out;
    out.name = p.name;
    out.preset = &p;
    if (p.first_order) {
      out.transport = p.first_order;
    } else {
      out.wave = p.wave;
      out.transport = as_first_order(*p.wave);
    }
    return out;
  }
  const std::string type = spec.value("type", "");
  if (type == "first-order") return build_first_order(spec);
  if (type == "wave") return build_wave(spec);
  throw ConfigError("problem: need 'preset' or type 'first-order' / 'wave'");
}

}  // namespace perihyp
