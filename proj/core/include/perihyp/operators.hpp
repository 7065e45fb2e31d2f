#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <vector>

#include "perihyp/characteristics.hpp"
#include "perihyp/field.hpp"
#include "perihyp/problem.hpp"

namespace perihyp {

namespace detail {

/// Dense pack of time columns: col(g) is the nodal time circle at slot g.
struct ColMat {
  int nt = 0;
  std::vector<double> d;
  ColMat() = default;
  ColMat(int ncols, int nt_) : nt(nt_), d(static_cast<size_t>(ncols) * nt_, 0.0) {}
  std::span<double> col(int g) { return {d.data() + static_cast<size_t>(g) * nt, (size_t)nt}; }
  std::span<const double> col(int g) const {
    return {d.data() + static_cast<size_t>(g) * nt, (size_t)nt};
  }
};

/// Field (plus problem aux) sampled at the quadrature abscissae, columns per
/// quadrature point.
struct SampledField {
  std::vector<ColMat> u;    // [component]
  std::vector<ColMat> aux;  // [aux slot]
};

/// Damping-exponent tables for one frozen argument v:
/// Q_j(theta, x) = int_0^x beta_j(theta + P_j(eta), eta; v) / a_j(eta) d eta,
/// stored as theta-indexed nodal columns at quadrature points and grid nodes.
struct ExponentTables {
  std::vector<ColMat> beta;    // [j], nodal-t columns at quadrature points
  std::vector<ColMat> q_quad;  // [j], theta columns at quadrature points
  std::vector<ColMat> q_grid;  // [j], theta columns at grid nodes
};

}  // namespace detail

/// Discrete application of the integral operators of one problem at one
/// (lambda, u0): the boundary operator C, the interior operator D, their
/// linearizations frozen at u0, and the residual map
/// F(u) = u - C(lambda,u0) u - D(lambda,u,u0).
///
/// All shifted time evaluations go through trigonometric interpolation; the
/// per-component travel times and damping exponents are precomputed once so
/// repeated applications cost a fixed number of column transforms.
class OperatorSet {
 public:
  OperatorSet(const TransportProblem& p, double lambda, Field u0);

  const TransportProblem& problem() const { return *p_; }
  double lambda() const { return lambda_; }
  const Field& frozen() const { return u0_; }
  const PeriodicGrid& grid() const { return u0_.grid(); }
  const CharTable& chars() const { return chars_; }

  /// C(lambda, u0) u  — boundary coupling with damping frozen at u0.
  Field apply_calC(const Field& u) const;
  /// Directional derivative of u -> C(lambda,u0)u + D(lambda,u,u0) at u0,
  /// minus the calC part: the partial-integral operator.
  Field apply_calD(const Field& w) const;
  /// C(lambda, v) u with an arbitrary frozen argument.
  Field apply_C(const Field& u, const Field& v) const;
  /// D(lambda, u, v).
  Field apply_D(const Field& u, const Field& v) const;
  /// F(lambda, u) = u - C(lambda,u0)u - D(lambda,u,u0).
  Field residual(const Field& u) const;

  // Trace-equation hooks (theta-indexed columns, see ExponentTables).
  double travel_full(int j) const { return chars_.P_full(j); }
  double travel_to(int j, int q) const {
    return chars_.P_boundary(j, chars_.quad().boundary_of_node(q));
  }
  std::span<const double> exponent_grid(int j, int q) const { return frozen_.q_grid[j].col(q); }
  std::span<const double> coupling_col(int j, int k) const { return r_[idx(j, k)].colview(); }
  std::span<const double> coupling_block_col(int alpha, int beta, int j, int k) const;

  /// calC(u) evaluated only at the two space boundaries. Inputs are the
  /// boundary time columns of u (bnd0[k] at x=0, bnd1[k] at x=1; empty
  /// columns read as zero), outputs the boundary columns of calC(u). Shares
  /// the evaluation path of apply_calC column for column.
  void calC_boundary(const std::vector<std::vector<double>>& bnd0,
                     const std::vector<std::vector<double>>& bnd1,
                     std::vector<std::vector<double>>& out0,
                     std::vector<std::vector<double>>& out1) const;

 private:
  struct NodalCol {
    std::vector<double> v;
    std::span<const double> colview() const { return v; }
  };
  int idx(int j, int k) const { return j * p_->dim() + k; }

  detail::SampledField sample(const Field& f) const;
  detail::ExponentTables build_exponents(const detail::SampledField& v) const;
  std::vector<double> calC_scol(int j, const std::vector<std::vector<double>>& bnd0,
                                const std::vector<std::vector<double>>& bnd1) const;
  void calC_col_from_s(const detail::ExponentTables& t, int j, const std::vector<double>& s,
                       int q, std::span<double> out) const;
  Field apply_C_impl(const detail::ExponentTables& t, const Field& u) const;
  Field apply_D_impl(const detail::ExponentTables& t, const detail::SampledField& su) const;
  Field apply_sourcecols(const detail::ExponentTables& t,
                         std::vector<detail::ColMat>& fcols) const;

  const TransportProblem* p_;
  double lambda_;
  Field u0_;
  CharTable chars_;
  detail::ExponentTables frozen_;                 // tables for v = u0
  std::vector<detail::ColMat> lin_u_;             // [j*n + k] frozen dB coefficients
  std::vector<detail::ColMat> lin_aux_;           // [j*naux + a]
  std::vector<NodalCol> r_;                       // reflection coupling at nodes
  std::vector<NodalCol> rblk_;                    // general blocks, [((a*2+b)*n+j)*n+k]
};

/// Dense matrix of u -> u - calC u - calD u (or parts of it) by applying the
/// matrix-free operator to every unit basis field. Intended for small grids.
Eigen::MatrixXd assemble_dense(const OperatorSet& ops, bool include_calC = true,
                               bool include_calD = true);

// Free-function forms mirroring the operator definitions.
Field apply_C(const TransportProblem& p, double lambda, const Field& v, const Field& u);
Field apply_D(const TransportProblem& p, double lambda, const Field& u, const Field& v);
Field apply_calC(const TransportProblem& p, double lambda, const Field& u0, const Field& u);
Field apply_calD(const TransportProblem& p, double lambda, const Field& u0, const Field& u);
Field residual_F(const TransportProblem& p, double lambda, const Field& u0, const Field& u);

}  // namespace perihyp
