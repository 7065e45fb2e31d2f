#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "perihyp/field.hpp"
#include "perihyp/operators.hpp"

namespace perihyp {

/// Relative sigma_min below which solves refuse the system as resonant.
inline constexpr double kTraceResonanceFloor = 1e-10;

/// Condition indicators of the boundary-trace system.
struct TraceCondition {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double sigma_min_rel = 0.0;
  double cond = 0.0;
  /// min over Fourier modes 1 <= k <= nt/2 - 1 of the trace-equation
  /// multiplier modulus; available when the system reduces to one circulant
  /// block (single trace unknown with t-independent coefficients).
  std::optional<double> min_mode_multiplier;
  std::optional<double> zero_mode_multiplier;
  int size = 0;
  std::string side;
};

/// Resolvent of I - calC(lambda): collapses the operator to a closed
/// functional equation for the boundary traces, solves it by collocation on
/// the time grid, and propagates the traces back through the boundary
/// operator itself, so the resolvent identity holds to rounding.
///
/// For reflection couplings both one-boundary reductions are assembled and
/// the better conditioned one is used; general couplings collocate all
/// boundary traces at once.
class TraceSolver {
 public:
  explicit TraceSolver(const OperatorSet& ops);

  /// Solve (I - calC(lambda)) u = f. Throws ResonanceError when the trace
  /// matrix is singular relative to the floor.
  Field solve(const Field& f) const;

  /// Neumann-series fast path u <- calC u + f; valid when ||calC|| < 1.
  Field solve_neumann(const Field& f, double tol = 1e-12, int max_iter = 256) const;

  TraceCondition condition() const { return chosen().info; }
  bool resonant() const { return chosen().info.sigma_min_rel < kTraceResonanceFloor; }
  const Eigen::MatrixXd& matrix() const { return chosen().M; }

  /// Discrete estimate d with ||solve(f)||_0 <= d ||f||_0 on probe fields
  /// (reported, not certified).
  double norm_estimate() const;

 private:
  using Cols = std::vector<std::vector<double>>;

  struct Reduction {
    enum class Side { lower, upper, both, identity };
    Side side = Side::identity;
    // Unknown trace blocks as (component, boundary) pairs.
    std::vector<std::pair<int, int>> blocks;
    Eigen::MatrixXd M;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    TraceCondition info;
  };

  const Reduction& chosen() const { return reductions_[chosen_]; }
  Reduction build(Reduction::Side side) const;
  void finish(Reduction& r) const;
  /// The boundary-trace image of the composed boundary operator for one
  /// reduction: traces in, hat-traces out.
  void apply_map(const Reduction& r, const Eigen::VectorXd& in, Eigen::VectorXd& out) const;

  const OperatorSet* ops_;
  std::vector<Reduction> reductions_;
  int chosen_ = 0;
  mutable std::optional<double> norm_est_;
};

/// Spec-shaped helpers.
TraceCondition trace_condition(const TransportProblem& p, double lambda, const Field& u0);
Field solve_I_minus_calC(const TransportProblem& p, double lambda, const Field& u0,
                         const Field& f);

}  // namespace perihyp
