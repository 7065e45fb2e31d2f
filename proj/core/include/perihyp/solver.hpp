#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "perihyp/field.hpp"
#include "perihyp/operators.hpp"
#include "perihyp/problem.hpp"
#include "perihyp/tracesolve.hpp"

namespace perihyp {

struct SolverOptions {
  double tol = 1e-8;            // outer residual sup-norm target
  int max_outer = 50;
  double inner_tol_factor = 1e-2;  // inner tolerance = factor * tol (scaled by rhs)
  int max_inner = 200;
  int dense_fallback_nodes = 16 * 16;  // nt*nx at or below which dense LU may take over
  int diverge_window = 5;              // consecutive non-contracting steps before giving up
};

enum class SolveStatus { converged, stalled, resonance, max_iter, diverged };

const char* to_string(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::max_iter;
  std::vector<double> residuals;          // sup norms per outer step
  std::vector<double> ratios;             // residuals[k+1] / residuals[k]
  std::vector<int> inner_iterations;      // per outer step (0 = dense path)
  double final_residual = 0.0;
  double resonant_lambda = 0.0;           // set when status == resonance
  std::string note;                       // e.g. basin-of-attraction caveat
};

/// Frozen-Jacobian context: the operator tables and trace factorization at
/// one (lambda, u0), reused across all linear solves of a quasi-Newton run.
class FrozenJacobian {
 public:
  FrozenJacobian(const TransportProblem& p, double lambda, Field u0);

  const OperatorSet& ops() const { return ops_; }
  const TraceSolver& trace() const { return trace_; }

  /// Solve (I - calC - calD) w = rhs by the stationary iteration
  /// w <- (I - calC)^{-1} (calD w + rhs); dense LU fallback on small grids.
  /// Throws ResonanceError / LinearStallError.
  Field solve(const Field& rhs, const SolverOptions& opts, int* inner_count = nullptr) const;

 private:
  OperatorSet ops_;
  TraceSolver trace_;
  mutable std::shared_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> dense_lu_;
};

Field solve_linearized(const TransportProblem& p, double lambda, const Field& u0,
                       const Field& rhs, const SolverOptions& opts = {});

/// Quasi-Newton iteration u <- u - dF(lambda,u_init)^{-1} F(lambda,u) with the
/// Jacobian frozen at u_init.
std::pair<Field, SolveReport> quasi_newton(const TransportProblem& p, double lambda,
                                           const Field& u_init, const SolverOptions& opts = {});

struct SolutionFamily {
  std::vector<double> lambdas;
  std::vector<Field> fields;      // empty Field marks a failed solve
  std::vector<SolveReport> reports;
  bool all_converged() const;
};

/// March over the sorted lambda grid outward from the entry nearest zero,
/// warm-starting each solve from the previous solution (and re-freezing the
/// Jacobian there).
SolutionFamily continuation(const TransportProblem& p, std::vector<double> lambda_grid,
                            const Field& u_seed, const SolverOptions& opts = {},
                            bool continue_past_failures = false);

struct SmoothnessProbe {
  struct Order {
    int order = 0;
    Field difference;        // central divided difference at the center lambda
    double norm0 = 0.0;
    double norm1 = 0.0;
    double richardson_order = 0.0;  // NaN when not enough points
  };
  double center_lambda = 0.0;
  double step = 0.0;
  std::vector<Order> orders;
};

/// Central divided differences of lambda -> u(lambda) up to the given order,
/// with Richardson convergence-order estimates from step doubling.
SmoothnessProbe smoothness_probe(const SolutionFamily& fam, int max_order);

struct FiberVerdict {
  bool bound_satisfied = false;   // r[k+1] <= c r[k] + s[k] for all k
  bool predicts_zero = false;     // tail of s vanishes, so the bound forces r -> 0
  double worst_violation = 0.0;
  std::vector<double> envelope;   // geometric-envelope bound on r
};

/// Check the linear fiber-contraction recursion r_{k+1} <= c r_k + s_k and
/// evaluate its explicit envelope.
FiberVerdict monitor_fiber(std::span<const double> r, std::span<const double> s, double c);

}  // namespace perihyp
