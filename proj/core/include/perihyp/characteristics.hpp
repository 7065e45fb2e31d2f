#pragma once

#include <array>
#include <span>
#include <vector>

#include "perihyp/field.hpp"
#include "perihyp/problem.hpp"

namespace perihyp {

/// Composite 4-point Gauss-Legendre partition of [0, 1], panel boundaries
/// aligned with the space grid so that every grid node is reachable by whole
/// panels. At least 32 panels per unit length.
class LineQuadrature {
 public:
  static LineQuadrature for_grid(int nx);

  int panels() const { return panels_; }
  int points() const { return panels_ * 4; }
  double panel_width() const { return width_; }
  /// Global abscissa / weight of quadrature point g (weights include width).
  double node(int g) const { return nodes_[g]; }
  double weight(int g) const { return weights_[g]; }
  /// Panel boundary position b = 0..panels.
  double boundary(int b) const { return width_ * b; }
  /// First panel of the grid interval [x_q, x_{q+1}] and panels per interval.
  int panels_per_interval() const { return per_interval_; }
  /// Panel boundary index of grid node q.
  int boundary_of_node(int q) const { return q * per_interval_; }

  /// Partial-integral matrix on the reference panel [0,1]: integrating the
  /// cubic through the 4 Gauss nodes from 0 to node g uses
  /// width * sum_h partial(g,h) * f(node_h).
  double partial(int g, int h) const { return partial_[g][h]; }
  /// Reference full-panel weights (sum to 1).
  double ref_weight(int h) const { return ref_w_[h]; }

 private:
  LineQuadrature() = default;
  int panels_ = 0;
  int per_interval_ = 1;
  double width_ = 0.0;
  std::vector<double> nodes_, weights_;
  std::array<std::array<double, 4>, 4> partial_{};
  std::array<double, 4> ref_w_{};
};

/// Per-(component, lambda) travel-time tables on a LineQuadrature layout.
/// P_j(x) = int_0^x dxi / a_j(xi, lambda). Construction throws
/// SingularSpeedError when a speed magnitude drops below 1e-12.
class CharTable {
 public:
  CharTable(const TransportProblem& p, double lambda, LineQuadrature quad);

  const LineQuadrature& quad() const { return quad_; }
  double lambda() const { return lambda_; }

  double inv_speed(int j, int g) const { return inv_a_[j][g]; }
  double P_quad(int j, int g) const { return P_quad_[j][g]; }
  double P_boundary(int j, int b) const { return P_bnd_[j][b]; }
  double P_full(int j) const { return P_bnd_[j].back(); }

  /// P_j at an arbitrary x in [0,1] (panel prefix plus a fresh sub-Gauss rule).
  double P(int j, double x) const;

  /// Characteristic time tau_j(t, x, xi) = t + P_j(xi) - P_j(x).
  double tau(int j, double t, double x, double xi) const {
    return t + P(j, xi) - P(j, x);
  }

 private:
  const TransportProblem* p_;
  double lambda_;
  LineQuadrature quad_;
  std::vector<std::vector<double>> inv_a_;   // [j][g]
  std::vector<std::vector<double>> P_quad_;  // [j][g]
  std::vector<std::vector<double>> P_bnd_;   // [j][b]
};

/// tau_j(t, x, xi, lambda): time at which the j-th characteristic through
/// (t, x) crosses xi. Direct quadrature; shift-equivariant in t by construction.
double tau(const TransportProblem& p, int j, double t, double x, double xi, double lambda);

/// Signed crossing time int_x^xi dxi / a_j.
double travel_time(const TransportProblem& p, int j, double x, double xi, double lambda);

/// Exponential damping factor c_j(t, x, xi, lambda, v) accumulated along the
/// characteristic, with the diagonal coefficient evaluated on the frozen
/// field v.
double damping(const TransportProblem& p, int j, double t, double x, double xi, double lambda,
               const Field& v);

}  // namespace perihyp
