#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "perihyp/field.hpp"

namespace perihyp {

/// Values of a prepared field at one evaluation point: the component values
/// plus any problem-defined derived quantities (see TransportProblem::make_aux).
struct StatePoint {
  std::span<const double> u;
  std::span<const double> aux;
};

/// Boundary coupling between the two space boundaries.
///
/// reflection: components 1..m at x=0 are expressed through components
/// m+1..n at x=0, and components m+1..n at x=1 through components 1..m at
/// x=1. Entries outside that index pattern are structurally zero.
///
/// general: four coefficient blocks r00, r01, r10, r11; rows 1..m give
/// values at x=0, rows m+1..n give values at x=1, columns run over all
/// components at x=0 (alpha=0 blocks) or x=1 (alpha=1 blocks).
class BoundaryCoupling {
 public:
  enum class Kind { reflection, general };
  using Entry = std::function<double(int j, int k, double t, double lambda)>;

  static BoundaryCoupling none(int n, int m);
  static BoundaryCoupling reflection(int n, int m, Entry r);
  static BoundaryCoupling general(int n, int m, Entry r00, Entry r01, Entry r10, Entry r11);

  Kind kind() const { return kind_; }
  int dim() const { return n_; }
  int lower_count() const { return m_; }

  /// Reflection entry with the legal index pattern enforced (0 outside it).
  double r(int j, int k, double t, double lambda) const;
  /// General-coupling block entry; alpha/beta pick the block r^{alpha beta}.
  double rblock(int alpha, int beta, int j, int k, double t, double lambda) const;

 private:
  Kind kind_ = Kind::reflection;
  int n_ = 0, m_ = 0;
  Entry r_;                      // reflection
  Entry r00_, r01_, r10_, r11_;  // general
};

/// Semilinear transport system in the integral-equation normal form
///
///   d_t u_j + a_j(x, lambda) d_x u_j + B_j(t, x, lambda, u) = 0,
///
/// where B_j may depend on u through point values and through the derived
/// quantities listed by make_aux (used by the second-order reduction for the
/// nonlocal antiderivative term). The operator machinery needs, per
/// component, the speed, the diagonal damping coefficient
/// beta_j = d/du_j of B_j (frozen argument), the full source B_j, and the
/// directional derivative of B_j.
class TransportProblem {
 public:
  virtual ~TransportProblem() = default;

  int dim() const { return n_; }
  /// Number of components whose boundary condition sits at x = 0.
  int lower_count() const { return m_; }
  const BoundaryCoupling& coupling() const { return coupling_; }

  virtual double speed(int j, double x, double lambda) const = 0;

  /// Derived per-point quantities carried alongside the field (default none).
  virtual int aux_count() const { return 0; }
  virtual Field make_aux(double lambda, const Field& u) const;

  virtual double diag_coeff(int j, double t, double x, double lambda,
                            const StatePoint& v) const = 0;
  virtual double source(int j, double t, double x, double lambda,
                        const StatePoint& u) const = 0;

  /// Coefficients of the directional derivative of B_j at the state `at`:
  /// dB_j[dir] = sum_k coeff_u[k] dir.u[k] + sum_a coeff_aux[a] dir.aux[a].
  virtual void linearized_source(int j, double t, double x, double lambda, const StatePoint& at,
                                 std::span<double> coeff_u,
                                 std::span<double> coeff_aux) const = 0;

  /// dB_j at `at` applied to the direction `dir` (dot with linearized_source).
  double source_derivative(int j, double t, double x, double lambda, const StatePoint& at,
                           const StatePoint& dir) const;

 protected:
  TransportProblem(int n, int m, BoundaryCoupling coupling);
  int n_, m_;
  BoundaryCoupling coupling_;
};

/// Coefficient-based problem: b_j depends on the point value of u only.
class FirstOrderProblem : public TransportProblem {
 public:
  using Speed = std::function<double(int j, double x, double lambda)>;
  using Source = std::function<double(int j, double t, double x, double lambda,
                                      std::span<const double> u)>;
  using SourceJac = std::function<double(int j, int k, double t, double x, double lambda,
                                         std::span<const double> u)>;

  FirstOrderProblem(int n, int m, Speed a, Source b, SourceJac db, BoundaryCoupling coupling);

  double speed(int j, double x, double lambda) const override { return a_(j, x, lambda); }
  double b(int j, double t, double x, double lambda, std::span<const double> u) const {
    return b_(j, t, x, lambda, u);
  }
  double db(int j, int k, double t, double x, double lambda, std::span<const double> u) const {
    return db_(j, k, t, x, lambda, u);
  }

  double diag_coeff(int j, double t, double x, double lambda,
                    const StatePoint& v) const override {
    return db_(j, j, t, x, lambda, v.u);
  }
  double source(int j, double t, double x, double lambda, const StatePoint& u) const override {
    return b_(j, t, x, lambda, u.u);
  }
  void linearized_source(int j, double t, double x, double lambda, const StatePoint& at,
                         std::span<double> coeff_u, std::span<double>) const override {
    for (int k = 0; k < n_; ++k) coeff_u[k] = db_(j, k, t, x, lambda, at.u);
  }

 private:
  Speed a_;
  Source b_;
  SourceJac db_;
};

/// Second-order problem data: d_t^2 u - a(x,lambda)^2 d_x^2 u
///   + b(t, x, lambda, u, d_t u, d_x u) = 0 with u(t,0) = d_x u(t,1) = 0.
/// Partial derivatives of b with respect to arguments 4, 5, 6 are supplied
/// by the caller (checked by diagnostics::derivative_consistency).
struct WaveProblem {
  using Coefficient = std::function<double(double x, double lambda)>;
  using Source = std::function<double(double t, double x, double lambda, double u, double p,
                                      double q)>;
  Coefficient a;
  Coefficient dxa;
  Source b;
  Source d4b;
  Source d5b;
  Source d6b;
};

struct Violation {
  std::string hypothesis;
  std::string detail;
  double x = 0.0;
  double lambda = 0.0;
};

struct ValidationReport {
  bool passed = true;
  std::vector<Violation> violations;
};

/// Sample the standing hypotheses (nonvanishing, pairwise-distinct speeds;
/// time-periodic couplings and sources) on a tensor grid of (x, lambda).
ValidationReport validate(const TransportProblem& p, double lambda_lo, double lambda_hi,
                          int samples = 64);
ValidationReport validate(const WaveProblem& p, double lambda_lo, double lambda_hi,
                          int samples = 64);

}  // namespace perihyp
