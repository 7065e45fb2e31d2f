#include "perihyp/wave.hpp"

#include <cmath>
#include <stdexcept>

#include "perihyp/interp.hpp"

namespace perihyp {

namespace {

BoundaryCoupling wave_coupling() {
  // v1(t,0) = -v2(t,0) and v2(t,1) = +v1(t,1), from the mixed boundary
  // conditions u(t,0) = d_x u(t,1) = 0.
  return BoundaryCoupling::reflection(2, 1, [](int j, int k, double, double) {
    if (j == 0 && k == 1) return -1.0;
    if (j == 1 && k == 0) return 1.0;
    return 0.0;
  });
}

}  // namespace

WaveReducedSystem::WaveReducedSystem(WaveProblem wp)
    : TransportProblem(2, 1, wave_coupling()), wp_(std::move(wp)) {}

double WaveReducedSystem::speed(int j, double x, double lambda) const {
  const double a = wp_.a(x, lambda);
  return (j == 0) ? -a : a;
}

Field WaveReducedSystem::make_aux(double lambda, const Field& v) const {
  const auto& g = v.grid();
  Field aux(g, 1);
  std::vector<double> integrand(g.nx), W(g.nx);
  for (int it = 0; it < g.nt; ++it) {
    auto r0 = v.row(0, it);
    auto r1 = v.row(1, it);
    for (int ix = 0; ix < g.nx; ++ix)
      integrand[ix] = (r0[ix] - r1[ix]) / (2.0 * wp_.a(g.x(ix), lambda));
    interp::quadratic_antiderivative(integrand, g.hx(), W);
    for (int ix = 0; ix < g.nx; ++ix) aux.at(0, it, ix) = W[ix];
  }
  return aux;
}

double WaveReducedSystem::diag_coeff(int j, double t, double x, double lambda,
                                     const StatePoint& v) const {
  const double a = wp_.a(x, lambda);
  const double sign = (j == 0) ? 1.0 : -1.0;  // +dxa/2 for v1, -dxa/2 for v2
  const double u = j0(v), p = j1(v), q = j2(v, x, lambda);
  const double btilde =
      0.5 * wp_.d5b(t, x, lambda, u, p, q) + sign * wp_.d6b(t, x, lambda, u, p, q) / (2.0 * a);
  return sign * 0.5 * wp_.dxa(x, lambda) + btilde;
}

double WaveReducedSystem::source(int j, double t, double x, double lambda,
                                 const StatePoint& s) const {
  (void)j;  // both rows carry the same right-hand side
  const double u = j0(s), p = j1(s), q = j2(s, x, lambda);
  return 0.5 * wp_.dxa(x, lambda) * (s.u[0] - s.u[1]) + wp_.b(t, x, lambda, u, p, q);
}

void WaveReducedSystem::linearized_source(int j, double t, double x, double lambda,
                                          const StatePoint& at, std::span<double> coeff_u,
                                          std::span<double> coeff_aux) const {
  (void)j;
  const double a = wp_.a(x, lambda);
  const double u = j0(at), p = j1(at), q = j2(at, x, lambda);
  const double d4 = wp_.d4b(t, x, lambda, u, p, q);
  const double d5 = wp_.d5b(t, x, lambda, u, p, q);
  const double d6 = wp_.d6b(t, x, lambda, u, p, q);
  const double dxa2 = 0.5 * wp_.dxa(x, lambda);
  coeff_u[0] = dxa2 + 0.5 * d5 + d6 / (2.0 * a);
  coeff_u[1] = -dxa2 + 0.5 * d5 - d6 / (2.0 * a);
  coeff_aux[0] = d4;
}

Field reduce(const WaveProblem& wp, const Field& u, double lambda) {
  const auto& g = u.grid();
  double bnd = 0.0;
  for (int it = 0; it < g.nt; ++it) bnd = std::max(bnd, std::abs(u.at(0, it, 0)));
  if (bnd > 1e-6)
    throw std::invalid_argument("reduce: u(t,0) must vanish (sup " + std::to_string(bnd) + ")");

  const Field ut = u.time_derivative(1);
  Field v(g, 2);
  std::vector<double> M(g.nx), dy(g.nx);
  for (int it = 0; it < g.nt; ++it) {
    auto row = u.row(0, it);
    interp::spline_moments(row, g.hx(), M);
    interp::spline_nodal_derivative(row, M, g.hx(), dy);
    for (int ix = 0; ix < g.nx; ++ix) {
      const double ad = wp.a(g.x(ix), lambda) * dy[ix];
      v.at(0, it, ix) = ut.at(0, it, ix) + ad;
      v.at(1, it, ix) = ut.at(0, it, ix) - ad;
    }
  }
  return v;
}

Field recover(const WaveProblem& wp, const Field& v, double lambda) {
  const auto& g = v.grid();
  Field u(g, 1);
  std::vector<double> integrand(g.nx), W(g.nx);
  for (int it = 0; it < g.nt; ++it) {
    for (int ix = 0; ix < g.nx; ++ix)
      integrand[ix] =
          (v.at(0, it, ix) - v.at(1, it, ix)) / (2.0 * wp.a(g.x(ix), lambda));
    interp::quadratic_antiderivative(integrand, g.hx(), W);
    for (int ix = 0; ix < g.nx; ++ix) u.at(0, it, ix) = W[ix];
  }
  return u;
}

std::shared_ptr<WaveReducedSystem> as_first_order(const WaveProblem& wp) {
  return std::make_shared<WaveReducedSystem>(wp);
}

WaveSolveResult wave_solve(const WaveProblem& wp, double lambda, PeriodicGrid grid,
                           const SolverOptions& opts) {
  const auto sys = as_first_order(wp);
  const Field seed(grid, 2);
  auto [v, report] = quasi_newton(*sys, lambda, seed, opts);
  WaveSolveResult out;
  out.report = std::move(report);
  out.invariants = v;
  out.u = recover(wp, v, lambda);
  if (out.report.status == SolveStatus::converged) {
    // Pointwise residual of the second-order equation by numerical
    // differentiation (spectral in t, spline in x).
    const Field utt = out.u.time_derivative(2);
    const Field ut = out.u.time_derivative(1);
    std::vector<double> M(grid.nx), dy(grid.nx);
    double res = 0.0;
    for (int it = 0; it < grid.nt; ++it) {
      auto row = out.u.row(0, it);
      interp::spline_moments(row, grid.hx(), M);
      interp::spline_nodal_derivative(row, M, grid.hx(), dy);
      for (int ix = 0; ix < grid.nx; ++ix) {
        const double a = wp.a(grid.x(ix), lambda);
        const double val = utt.at(0, it, ix) - a * a * M[ix] +
                           wp.b(grid.t(it), grid.x(ix), lambda, out.u.at(0, it, ix),
                                ut.at(0, it, ix), dy[ix]);
        res = std::max(res, std::abs(val));
      }
    }
    out.pde_residual = res;
  }
  return out;
}

}  // namespace perihyp
