#pragma once

#include <memory>

#include "perihyp/field.hpp"
#include "perihyp/problem.hpp"
#include "perihyp/solver.hpp"

namespace perihyp {

/// 2x2 first-order system produced by the Riemann-invariant reduction of a
/// WaveProblem: unknowns v1 = d_t u + a d_x u, v2 = d_t u - a d_x u, speeds
/// -a and +a, boundary signs v1(t,0) = -v2(t,0), v2(t,1) = v1(t,1). The
/// source keeps the nonlocal antiderivative of (v1 - v2)/(2a) as an aux
/// quantity so the original u, d_t u, d_x u can be reconstructed pointwise.
class WaveReducedSystem : public TransportProblem {
 public:
  explicit WaveReducedSystem(WaveProblem wp);

  const WaveProblem& wave() const { return wp_; }

  double speed(int j, double x, double lambda) const override;
  int aux_count() const override { return 1; }
  Field make_aux(double lambda, const Field& v) const override;
  double diag_coeff(int j, double t, double x, double lambda,
                    const StatePoint& v) const override;
  double source(int j, double t, double x, double lambda, const StatePoint& u) const override;
  void linearized_source(int j, double t, double x, double lambda, const StatePoint& at,
                         std::span<double> coeff_u, std::span<double> coeff_aux) const override;

 private:
  double j0(const StatePoint& s) const { return s.aux[0]; }
  double j1(const StatePoint& s) const { return 0.5 * (s.u[0] + s.u[1]); }
  double j2(const StatePoint& s, double x, double lambda) const {
    return (s.u[0] - s.u[1]) / (2.0 * wp_.a(x, lambda));
  }
  WaveProblem wp_;
};

/// Riemann invariants of a scalar field: v1,2 = d_t u +- a d_x u.
/// Requires u(t, 0) = 0 within 1e-6.
Field reduce(const WaveProblem& wp, const Field& u, double lambda);

/// u(t, x) = 1/2 int_0^x (v1 - v2) / a. Exact inverse of reduce on nodal data.
Field recover(const WaveProblem& wp, const Field& v, double lambda);

std::shared_ptr<WaveReducedSystem> as_first_order(const WaveProblem& wp);

struct WaveSolveResult {
  Field u;                 // scalar solution
  Field invariants;        // the solved 2-component v field
  SolveReport report;
  double pde_residual = 0.0;  // sup norm of the second-order residual by
                              // numerical differentiation
};

/// Solve the second-order problem on the given grid: reduce, run the
/// quasi-Newton iteration on the invariants from a zero seed, recover u,
/// and evaluate the pointwise PDE residual as a final check.
WaveSolveResult wave_solve(const WaveProblem& wp, double lambda, PeriodicGrid grid,
                           const SolverOptions& opts = {});

}  // namespace perihyp
