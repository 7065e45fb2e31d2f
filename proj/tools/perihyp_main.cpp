// perihyp — time-periodic solutions of semilinear hyperbolic boundary value
// problems: solve, continue in the parameter, scan for resonances, probe the
// smoothness of the data-to-solution map, and run diagnostics.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "perihyp/config.hpp"
#include "perihyp/diagnostics.hpp"
#include "perihyp/errors.hpp"
#include "perihyp/expressions.hpp"
#include "perihyp/io.hpp"
#include "perihyp/presets.hpp"
#include "perihyp/solver.hpp"
#include "perihyp/tracesolve.hpp"
#include "perihyp/version.hpp"
#include "perihyp/wave.hpp"

namespace fs = std::filesystem;
using namespace perihyp;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitResonance = 2;
constexpr int kExitNotConverged = 3;

struct Cli {
  std::string config_path;
  std::string out_dir;
  std::optional<int> nt, nx;
  std::optional<double> tol;
};

RunConfig effective_config(const Cli& cli, const std::string& command) {
  RunConfig cfg = load_config(cli.config_path);
  if (!cfg.command.empty() && cfg.command != command)
    throw ConfigError("config command '" + cfg.command + "' does not match subcommand '" +
                      command + "'");
  cfg.command = command;
  if (cli.nt) cfg.nt = *cli.nt;
  if (cli.nx) cfg.nx = *cli.nx;
  if (cli.tol) cfg.tol = *cli.tol;
  if (!cli.out_dir.empty()) cfg.out_dir = cli.out_dir;
  (void)cfg.grid();  // re-validate overrides
  if (cfg.tol <= 0.0) throw ConfigError("tol must be positive");
  return cfg;
}

FileMeta base_meta(const RunConfig& cfg, const BuiltProblem& bp) {
  FileMeta meta;
  meta["version"] = kVersion;
  meta["config_hash"] = cfg.hash();
  meta["command"] = cfg.command;
  meta["problem"] = bp.name;
  meta["nt"] = std::to_string(cfg.nt);
  meta["nx"] = std::to_string(cfg.nx);
  return meta;
}

std::string fmtg(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions opts;
  opts.tol = cfg.tol;
  opts.max_outer = cfg.max_iter;
  return opts;
}

Field seed_field(const RunConfig& cfg, int ncomp, double lambda) {
  const PeriodicGrid g = cfg.grid();
  if (cfg.seed.empty()) return Field(g, ncomp);
  if (static_cast<int>(cfg.seed.size()) != ncomp)
    throw ConfigError("seed needs one expression per component");
  const std::vector<std::string> vars = {"t", "x", "lambda"};
  std::vector<Expression> exprs;
  for (const auto& s : cfg.seed) exprs.push_back(Expression::parse(s, vars));
  return Field::from_function(g, ncomp, [&](int c, double t, double x) {
    const double vals[3] = {t, x, lambda};
    return exprs[c].eval(vals);
  });
}

std::vector<double> lambda_grid(const RunConfig& cfg) {
  if (!cfg.lambda_range) throw ConfigError("this command needs a lambda_range");
  const auto& r = *cfg.lambda_range;
  std::vector<double> out;
  for (int i = 0; i <= r.steps; ++i)
    out.push_back(r.min + (r.max - r.min) * static_cast<double>(i) / r.steps);
  return out;
}

int status_exit(SolveStatus s) {
  if (s == SolveStatus::converged) return kExitOk;
  if (s == SolveStatus::resonance) return kExitResonance;
  return kExitNotConverged;
}

int run_solve(const RunConfig& cfg) {
  const BuiltProblem bp = build_problem(cfg.problem);
  if (bp.is_wave()) throw ConfigError("'solve' needs a first-order problem; use wave-solve");
  FileMeta meta = base_meta(cfg, bp);
  meta["lambda"] = fmtg(cfg.lambda);
  const Field seed = seed_field(cfg, bp.transport->dim(), cfg.lambda);
  auto [u, rep] = quasi_newton(*bp.transport, cfg.lambda, seed, solver_options(cfg));
  write_field_csv((fs::path(cfg.out_dir) / "solution.csv").string(), u, meta);
  json body;
  body["lambda"] = cfg.lambda;
  body["report"] = report_to_json(rep);
  write_json((fs::path(cfg.out_dir) / "report.json").string(), body, meta);
  std::cout << "solve: " << to_string(rep.status) << ", final residual " << rep.final_residual
            << "\n";
  return status_exit(rep.status);
}

int run_wave_solve(const RunConfig& cfg) {
  const BuiltProblem bp = build_problem(cfg.problem);
  if (!bp.is_wave()) throw ConfigError("'wave-solve' needs a wave problem");
  FileMeta meta = base_meta(cfg, bp);
  meta["lambda"] = fmtg(cfg.lambda);
  const auto result = wave_solve(*bp.wave, cfg.lambda, cfg.grid(), solver_options(cfg));
  write_field_csv((fs::path(cfg.out_dir) / "solution.csv").string(), result.u, meta);
  write_field_csv((fs::path(cfg.out_dir) / "invariants.csv").string(), result.invariants, meta);
  json body;
  body["lambda"] = cfg.lambda;
  body["pde_residual"] = result.pde_residual;
  body["report"] = report_to_json(result.report);
  write_json((fs::path(cfg.out_dir) / "report.json").string(), body, meta);
  std::cout << "wave-solve: " << to_string(result.report.status) << ", pde residual "
            << result.pde_residual << "\n";
  return status_exit(result.report.status);
}

int run_continue(const RunConfig& cfg) {
  const BuiltProblem bp = build_problem(cfg.problem);
  FileMeta meta = base_meta(cfg, bp);
  const Field seed = seed_field(cfg, bp.transport->dim(), 0.0);
  const SolutionFamily fam = continuation(*bp.transport, lambda_grid(cfg), seed,
                                          solver_options(cfg), cfg.continue_past_failures);
  json rows = json::array();
  bool any_resonance = false;
  for (size_t i = 0; i < fam.lambdas.size(); ++i) {
    json row;
    row["lambda"] = fam.lambdas[i];
    row["status"] = to_string(fam.reports[i].status);
    row["final_residual"] = fam.reports[i].final_residual;
    if (!fam.fields[i].empty()) {
      char name[64];
      std::snprintf(name, sizeof(name), "solution_%03zu.csv", i);
      row["file"] = name;
      FileMeta fmeta = meta;
      fmeta["lambda"] = fmtg(fam.lambdas[i]);
      write_field_csv((fs::path(cfg.out_dir) / name).string(), fam.fields[i], fmeta);
    }
    if (fam.reports[i].status == SolveStatus::resonance) any_resonance = true;
    rows.push_back(std::move(row));
  }
  json body;
  body["family"] = std::move(rows);
  write_json((fs::path(cfg.out_dir) / "family.json").string(), body, meta);
  std::cout << "continue: " << fam.lambdas.size() << " points, "
            << (fam.all_converged() ? "all converged" : "with failures") << "\n";
  if (fam.all_converged()) return kExitOk;
  return any_resonance ? kExitResonance : kExitNotConverged;
}

int run_scan(const RunConfig& cfg) {
  const BuiltProblem bp = build_problem(cfg.problem);
  FileMeta meta = base_meta(cfg, bp);
  if (!cfg.lambda_range) throw ConfigError("scan-resonance needs a lambda_range");
  const Field u0 = seed_field(cfg, bp.transport->dim(), 0.0);
  const ResonanceTable table = resonance_scan(*bp.transport, u0, cfg.lambda_range->min,
                                              cfg.lambda_range->max, cfg.lambda_range->steps);
  write_json((fs::path(cfg.out_dir) / "resonance.json").string(), resonance_to_json(table),
             meta);
  int flagged = 0;
  for (const auto& row : table.rows) flagged += row.flagged() ? 1 : 0;
  std::cout << "scan-resonance: " << table.rows.size() << " rows, " << flagged << " flagged\n";
  return kExitOk;
}

int run_probe(const RunConfig& cfg) {
  const BuiltProblem bp = build_problem(cfg.problem);
  FileMeta meta = base_meta(cfg, bp);
  const Field seed = seed_field(cfg, bp.transport->dim(), 0.0);
  const SolutionFamily fam = continuation(*bp.transport, lambda_grid(cfg), seed,
                                          solver_options(cfg), cfg.continue_past_failures);
  if (!fam.all_converged()) {
    std::cout << "probe-smoothness: continuation failed\n";
    for (const auto& r : fam.reports)
      if (r.status == SolveStatus::resonance) return kExitResonance;
    return kExitNotConverged;
  }
  const SmoothnessProbe probe = smoothness_probe(fam, cfg.probe_order);
  write_json((fs::path(cfg.out_dir) / "smoothness.json").string(), probe_to_json(probe), meta);
  for (const auto& o : probe.orders) {
    char name[64];
    std::snprintf(name, sizeof(name), "difference_%d.csv", o.order);
    FileMeta fmeta = meta;
    fmeta["lambda"] = fmtg(probe.center_lambda);
    fmeta["difference_order"] = std::to_string(o.order);
    write_field_csv((fs::path(cfg.out_dir) / name).string(), o.difference, fmeta);
  }
  std::cout << "probe-smoothness: center " << probe.center_lambda << ", "
            << probe.orders.size() << " orders\n";
  return kExitOk;
}

int run_diagnose(const RunConfig& cfg) {
  const BuiltProblem bp = build_problem(cfg.problem);
  FileMeta meta = base_meta(cfg, bp);
  meta["lambda"] = fmtg(cfg.lambda);
  const PeriodicGrid g = cfg.grid();
  json body;

  const double box = std::max(0.5, std::abs(cfg.lambda));
  if (bp.is_wave()) {
    const auto vrep = validate(*bp.wave, -box, box);
    body["hypotheses_pass"] = vrep.passed;
    body["violations"] = vrep.violations.size();
    Field u0(g, 1);
    auto [R0, S0] = wave_R0S0(*bp.wave, u0);
    body["R0"] = R0;
    body["S0"] = S0;
    body["telegraph_check"] = telegraph_check(*bp.wave);
    body["derivative_consistency"] = derivative_consistency(*bp.wave).passed;
  } else {
    const auto vrep = validate(*bp.transport, -box, box);
    body["hypotheses_pass"] = vrep.passed;
    body["violations"] = vrep.violations.size();
    const auto* fo = dynamic_cast<const FirstOrderProblem*>(bp.transport.get());
    if (fo) body["derivative_consistency"] = derivative_consistency(*fo).passed;
  }

  const Field u0t = seed_field(cfg, bp.transport->dim(), cfg.lambda);
  if (bp.transport->coupling().kind() == BoundaryCoupling::Kind::reflection &&
      bp.transport->lower_count() > 0 &&
      bp.transport->lower_count() < bp.transport->dim()) {
    auto [R, S] = nonresonance_RS(*bp.transport, u0t, cfg.lambda);
    body["R"] = R;
    body["S"] = S;
    if (bp.transport->dim() == 2 && bp.transport->lower_count() == 1) {
      auto [R0, S0] = nonresonance_R0S0(*bp.transport, u0t, cfg.lambda);
      body["R0_profile"] = R0;
      body["S0_profile"] = S0;
    }
  }
  const auto bc = bc_contraction_check(*bp.transport, u0t, cfg.lambda);
  body["bc_row_sums_ok"] = bc.row_sums_ok;
  body["bc_sign_condition_ok"] = bc.sign_condition_ok;

  const TraceCondition tc = trace_condition(*bp.transport, cfg.lambda, u0t);
  json tr;
  tr["sigma_min"] = tc.sigma_min;
  tr["cond"] = tc.cond;
  tr["side"] = tc.side;
  if (tc.min_mode_multiplier) tr["min_mode_multiplier"] = *tc.min_mode_multiplier;
  body["trace_condition"] = tr;

  write_json((fs::path(cfg.out_dir) / "diagnostics.json").string(), body, meta);
  std::cout << "diagnose: written\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-periodic solver for semilinear hyperbolic boundary value problems"};
  app.require_subcommand(1);

  Cli cli;
  const std::vector<std::pair<std::string, int (*)(const RunConfig&)>> commands = {
      {"solve", run_solve},            {"wave-solve", run_wave_solve},
      {"continue", run_continue},      {"scan-resonance", run_scan},
      {"probe-smoothness", run_probe}, {"diagnose", run_diagnose},
  };
  for (const auto& [name, fn] : commands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", cli.config_path, "JSON config file")->required();
    sub->add_option("--out", cli.out_dir, "output directory (overrides config)");
    sub->add_option("--nt", cli.nt, "time samples (overrides config)");
    sub->add_option("--nx", cli.nx, "space samples (overrides config)");
    sub->add_option("--tol", cli.tol, "solver tolerance (overrides config)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    for (const auto& [name, fn] : commands) {
      if (app.got_subcommand(name)) {
        const RunConfig cfg = effective_config(cli, name);
        fs::create_directories(cfg.out_dir);
        return fn(cfg);
      }
    }
    std::cerr << "no subcommand\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
