#include "perihyp/solver.hpp"

#include <algorithm>
#include <cmath>

#include "perihyp/errors.hpp"

namespace perihyp {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::stalled: return "stalled";
    case SolveStatus::resonance: return "resonance";
    case SolveStatus::max_iter: return "max-iter";
    case SolveStatus::diverged: return "diverged";
  }
  return "unknown";
}

FrozenJacobian::FrozenJacobian(const TransportProblem& p, double lambda, Field u0)
    : ops_(p, lambda, std::move(u0)), trace_(ops_) {}

Field FrozenJacobian::solve(const Field& rhs, const SolverOptions& opts,
                            int* inner_count) const {
  const auto& g = ops_.grid();
  const double scale = std::max(1.0, rhs.norm_sup());
  const double inner_tol = opts.inner_tol_factor * opts.tol * scale;

  auto dense_solve = [&]() -> Field {
    if (!dense_lu_) {
      const Eigen::MatrixXd A = assemble_dense(ops_, true, true);
      dense_lu_ = std::make_shared<Eigen::PartialPivLU<Eigen::MatrixXd>>(A);
    }
    Eigen::VectorXd b(rhs.size());
    for (int i = 0; i < rhs.size(); ++i) b(i) = rhs.raw()[i];
    Eigen::VectorXd x = dense_lu_->solve(b);
    Field out(g, ops_.problem().dim());
    for (int i = 0; i < out.size(); ++i) out.raw()[i] = x(i);
    if (inner_count) *inner_count = 0;
    return out;
  };

  // Stationary iteration preconditioned by (I - calC)^{-1}.
  Field w = trace_.solve(rhs);
  Field y_prev = rhs;
  double res = std::numeric_limits<double>::infinity();
  double res_prev = std::numeric_limits<double>::infinity();
  int stagnant = 0;
  for (int it = 1; it <= opts.max_inner; ++it) {
    Field y = ops_.apply_calD(w);
    y += rhs;
    res = sup_distance(y, y_prev);  // = ||(I - calC - calD) w - rhs||
    if (res <= inner_tol) {
      if (inner_count) *inner_count = it;
      return w;
    }
    if (res >= 0.98 * res_prev) {
      if (++stagnant >= 8) break;
    } else {
      stagnant = 0;
    }
    res_prev = res;
    y_prev = y;
    w = trace_.solve(y);
  }
  if (g.nt * g.nx <= opts.dense_fallback_nodes) return dense_solve();
  throw LinearStallError(res);
}

Field solve_linearized(const TransportProblem& p, double lambda, const Field& u0,
                       const Field& rhs, const SolverOptions& opts) {
  return FrozenJacobian(p, lambda, u0).solve(rhs, opts);
}

std::pair<Field, SolveReport> quasi_newton(const TransportProblem& p, double lambda,
                                           const Field& u_init, const SolverOptions& opts) {
  SolveReport rep;
  rep.note = "uniqueness is local: the iterate stays in the basin of the frozen point u0";
  Field u = u_init;
  try {
    FrozenJacobian jac(p, lambda, u_init);
    if (jac.trace().resonant()) {
      rep.status = SolveStatus::resonance;
      rep.resonant_lambda = lambda;
      rep.note = "trace system singular at the frozen state";
      return {u, rep};
    }
    int bad_streak = 0;
    for (int it = 0; it <= opts.max_outer; ++it) {
      const Field r = jac.ops().residual(u);
      const double rn = r.norm_sup();
      if (!rep.residuals.empty())
        rep.ratios.push_back(rn / std::max(rep.residuals.back(), 1e-300));
      rep.residuals.push_back(rn);
      rep.final_residual = rn;
      if (rn <= opts.tol) {
        rep.status = SolveStatus::converged;
        return {u, rep};
      }
      if (!rep.ratios.empty() && rep.ratios.back() >= 1.0) {
        if (++bad_streak >= opts.diverge_window) {
          rep.status = SolveStatus::diverged;
          return {u, rep};
        }
      } else {
        bad_streak = 0;
      }
      if (it == opts.max_outer) break;
      int inner = 0;
      const Field w = jac.solve(r, opts, &inner);
      rep.inner_iterations.push_back(inner);
      u -= w;
    }
    rep.status = SolveStatus::max_iter;
  } catch (const ResonanceError& e) {
    rep.status = SolveStatus::resonance;
    rep.resonant_lambda = e.lambda;
    rep.note = e.what();
  } catch (const LinearStallError& e) {
    rep.status = SolveStatus::stalled;
    rep.note = e.what();
  }
  return {u, rep};
}

bool SolutionFamily::all_converged() const {
  for (const auto& r : reports)
    if (r.status != SolveStatus::converged) return false;
  return true;
}

SolutionFamily continuation(const TransportProblem& p, std::vector<double> lambda_grid,
                            const Field& u_seed, const SolverOptions& opts,
                            bool continue_past_failures) {
  std::sort(lambda_grid.begin(), lambda_grid.end());
  const int count = static_cast<int>(lambda_grid.size());
  SolutionFamily fam;
  fam.lambdas = lambda_grid;
  fam.fields.resize(count);
  fam.reports.resize(count);
  if (count == 0) return fam;

  int seed_idx = 0;
  for (int i = 1; i < count; ++i)
    if (std::abs(lambda_grid[i]) < std::abs(lambda_grid[seed_idx])) seed_idx = i;

  auto march = [&](int from, int to, int step) {
    Field warm = u_seed;
    bool have_warm = true;
    for (int i = from; i != to; i += step) {
      if (!have_warm && !continue_past_failures) break;
      auto [u, rep] = quasi_newton(p, lambda_grid[i], warm, opts);
      fam.reports[i] = std::move(rep);
      if (fam.reports[i].status == SolveStatus::converged) {
        warm = u;
        have_warm = true;
        fam.fields[i] = std::move(u);
      } else {
        have_warm = continue_past_failures;
      }
    }
  };
  march(seed_idx, count, +1);
  if (seed_idx > 0) {
    // Reuse the seed-point solution as the downward warm start when available.
    Field down_seed = u_seed;
    if (!fam.fields[seed_idx].empty()) down_seed = fam.fields[seed_idx];
    Field warm = down_seed;
    bool have_warm = true;
    for (int i = seed_idx - 1; i >= 0; --i) {
      if (!have_warm && !continue_past_failures) break;
      auto [u, rep] = quasi_newton(p, lambda_grid[i], warm, opts);
      fam.reports[i] = std::move(rep);
      if (fam.reports[i].status == SolveStatus::converged) {
        warm = u;
        have_warm = true;
        fam.fields[i] = std::move(u);
      } else {
        have_warm = continue_past_failures;
      }
    }
  }
  return fam;
}

namespace {

std::vector<double> central_coeffs(int order, int* radius) {
  // Even order: binomial stencil at integer offsets. Odd order: convolve the
  // even (order-1) stencil with the centered first difference [1, 0, -1]/2.
  std::vector<double> c;
  if (order % 2 == 0) {
    const int j = order;
    c.resize(j + 1);
    double binom = 1.0;
    for (int i = 0; i <= j; ++i) {
      c[i] = ((j - i) % 2 == 0 ? 1.0 : -1.0) * binom;
      binom = binom * (j - i) / (i + 1);
    }
    *radius = j / 2;
  } else {
    int r0 = 0;
    std::vector<double> even = central_coeffs(order - 1, &r0);
    c.assign(even.size() + 2, 0.0);
    for (size_t i = 0; i < even.size(); ++i) {
      c[i] -= 0.5 * even[i];
      c[i + 2] += 0.5 * even[i];
    }
    *radius = r0 + 1;
  }
  return c;
}

}  // namespace

SmoothnessProbe smoothness_probe(const SolutionFamily& fam, int max_order) {
  const int count = static_cast<int>(fam.lambdas.size());
  if (count < 2 * max_order + 1)
    throw std::invalid_argument("smoothness_probe: need at least 2*order+1 lambda points");
  const double h = fam.lambdas[1] - fam.lambdas[0];
  for (int i = 1; i + 1 < count; ++i)
    if (std::abs((fam.lambdas[i + 1] - fam.lambdas[i]) - h) > 1e-10 * std::max(1.0, std::abs(h)))
      throw std::invalid_argument("smoothness_probe: lambda grid must be uniform");
  for (const auto& f : fam.fields)
    if (f.empty()) throw std::invalid_argument("smoothness_probe: family has failed solves");

  const int center = count / 2;
  SmoothnessProbe probe;
  probe.center_lambda = fam.lambdas[center];
  probe.step = h;

  auto difference_at = [&](int order, int stride) -> std::optional<Field> {
    int radius = 0;
    const std::vector<double> c = central_coeffs(order, &radius);
    if (center - radius * stride < 0 || center + radius * stride >= count) return std::nullopt;
    Field acc(fam.fields[center].grid(), fam.fields[center].ncomp());
    const int off0 = -radius;
    for (size_t i = 0; i < c.size(); ++i) {
      if (c[i] == 0.0) continue;
      const int idx = center + (off0 + static_cast<int>(i)) * stride;
      Field term = fam.fields[idx];
      term *= c[i] / std::pow(h * stride, order);
      acc += term;
    }
    return acc;
  };

  for (int order = 1; order <= max_order; ++order) {
    SmoothnessProbe::Order po;
    po.order = order;
    auto d1 = difference_at(order, 1);
    if (!d1) throw std::invalid_argument("smoothness_probe: insufficient points");
    po.difference = *d1;
    po.norm0 = po.difference.norm_sup();
    po.norm1 = po.difference.norm_l(1);
    po.richardson_order = std::numeric_limits<double>::quiet_NaN();
    auto d2 = difference_at(order, 2);
    auto d4 = difference_at(order, 4);
    if (d2 && d4) {
      const double e1 = sup_distance(*d1, *d2);
      const double e2 = sup_distance(*d2, *d4);
      if (e1 > 0.0 && e2 > 0.0) po.richardson_order = std::log2(e2 / e1);
    }
    probe.orders.push_back(std::move(po));
  }
  return probe;
}

FiberVerdict monitor_fiber(std::span<const double> r, std::span<const double> s, double c) {
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("monitor_fiber: need c in (0,1)");
  FiberVerdict v;
  v.bound_satisfied = true;
  const size_t steps = r.empty() ? 0 : r.size() - 1;
  double smax = 0.0;
  for (size_t k = 0; k < s.size(); ++k) smax = std::max(smax, s[k]);
  for (size_t k = 0; k < steps; ++k) {
    const double sk = (k < s.size()) ? s[k] : 0.0;
    const double bound = c * r[k] + sk;
    const double slack = 1e-12 * (1.0 + std::abs(bound));
    if (r[k + 1] > bound + slack) {
      v.bound_satisfied = false;
      v.worst_violation = std::max(v.worst_violation, r[k + 1] - bound);
    }
  }
  // Geometric envelope r_{n+1} <= c^n r_1 + sum_{m<=n} c^{n-m} s_m.
  if (!r.empty()) {
    v.envelope.resize(r.size());
    v.envelope[0] = r[0];
    for (size_t k = 0; k < steps; ++k) {
      const double sk = (k < s.size()) ? s[k] : 0.0;
      v.envelope[k + 1] = c * v.envelope[k] + sk;
    }
  }
  // The envelope forces r -> 0 exactly when the tail of s vanishes.
  if (v.bound_satisfied) {
    const size_t tail_start = s.size() - std::max<size_t>(1, s.size() / 4);
    double tail = 0.0;
    for (size_t k = tail_start; k < s.size(); ++k) tail = std::max(tail, s[k]);
    v.predicts_zero = s.empty() || tail <= 1e-8 * (1.0 + smax);
  }
  return v;
}

}  // namespace perihyp
