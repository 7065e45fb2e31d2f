#include "perihyp/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace perihyp::interp {

void spline_moments(std::span<const double> y, double h, std::span<double> M, SplineBC bc) {
  const int n = static_cast<int>(y.size());
  if (n < 2) throw std::invalid_argument("spline_moments: need at least two points");
  if (n == 2) {
    M[0] = M[1] = 0.0;
    return;
  }
  if (n == 3) {
    // Unique quadratic through three points.
    const double m = (y[0] - 2.0 * y[1] + y[2]) / (h * h);
    M[0] = M[1] = M[2] = m;
    return;
  }
  // Interior equations: M[i-1] + 4 M[i] + M[i+1] = 6 (y[i-1] - 2 y[i] + y[i+1]) / h^2.
  // Boundary closures eliminate M[0] and M[n-1]:
  //   not-a-knot: M0 = 2 M1 - M2,  Mn-1 = 2 Mn-2 - Mn-3
  //   natural:    M0 = Mn-1 = 0
  const int m = n - 2;  // unknowns M[1..n-2]
  std::vector<double> diag(m), rhs(m), upper(m, 1.0), lower(m, 1.0);
  const double c = 6.0 / (h * h);
  for (int i = 1; i <= n - 2; ++i) rhs[i - 1] = c * (y[i - 1] - 2.0 * y[i] + y[i + 1]);
  for (int i = 0; i < m; ++i) diag[i] = 4.0;
  if (bc == SplineBC::not_a_knot) {
    // First row: (1)M0 + 4 M1 + M2 = r  with M0 = 2M1 - M2  ->  6 M1 + 0 M2 = r.
    diag[0] = 6.0;
    upper[0] = 0.0;
    diag[m - 1] = 6.0;
    lower[m - 1] = 0.0;
  }
  // Thomas algorithm.
  for (int i = 1; i < m; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> sol(m);
  sol[m - 1] = rhs[m - 1] / diag[m - 1];
  for (int i = m - 2; i >= 0; --i) sol[i] = (rhs[i] - upper[i] * sol[i + 1]) / diag[i];
  for (int i = 0; i < m; ++i) M[i + 1] = sol[i];
  if (bc == SplineBC::not_a_knot) {
    M[0] = 2.0 * M[1] - M[2];
    M[n - 1] = 2.0 * M[n - 2] - M[n - 3];
  } else {
    M[0] = 0.0;
    M[n - 1] = 0.0;
  }
}

namespace {

inline int locate(int n, double h, double x) {
  int i = static_cast<int>(std::floor(x / h));
  return std::clamp(i, 0, n - 2);
}

}  // namespace

double spline_eval(std::span<const double> y, std::span<const double> M, double h, double x) {
  const int n = static_cast<int>(y.size());
  if (n == 2) {
    const double u = std::clamp(x / h, 0.0, 1.0);
    return y[0] * (1.0 - u) + y[1] * u;
  }
  const int i = locate(n, h, x);
  const double u = x / h - i;
  const double v = 1.0 - u;
  return y[i] * v + y[i + 1] * u +
         (h * h / 6.0) * ((v * v * v - v) * M[i] + (u * u * u - u) * M[i + 1]);
}

double spline_deriv(std::span<const double> y, std::span<const double> M, double h, double x) {
  const int n = static_cast<int>(y.size());
  if (n == 2) return (y[1] - y[0]) / h;
  const int i = locate(n, h, x);
  const double u = x / h - i;
  const double v = 1.0 - u;
  return (y[i + 1] - y[i]) / h +
         (h / 6.0) * ((1.0 - 3.0 * v * v) * M[i] + (3.0 * u * u - 1.0) * M[i + 1]);
}

void spline_nodal_derivative(std::span<const double> y, std::span<const double> M, double h,
                             std::span<double> dy) {
  const int n = static_cast<int>(y.size());
  if (n == 2) {
    dy[0] = dy[1] = (y[1] - y[0]) / h;
    return;
  }
  for (int i = 0; i < n - 1; ++i)
    dy[i] = (y[i + 1] - y[i]) / h - (h / 6.0) * (2.0 * M[i] + M[i + 1]);
  dy[n - 1] = (y[n - 1] - y[n - 2]) / h + (h / 6.0) * (M[n - 2] + 2.0 * M[n - 1]);
}

void sample_row(std::span<const double> y, double h, std::span<const double> xs,
                std::span<double> out, SplineBC bc) {
  std::vector<double> M(y.size());
  spline_moments(y, h, M, bc);
  for (size_t i = 0; i < xs.size(); ++i) out[i] = spline_eval(y, M, h, xs[i]);
}

void quadratic_antiderivative(std::span<const double> g, double h, std::span<double> W) {
  const int n = static_cast<int>(g.size());
  W[0] = 0.0;
  if (n == 2) {
    W[1] = 0.5 * h * (g[0] + g[1]);
    return;
  }
  // Piece i: Q(x) = g_i + d_i s + c_i s^2, s = x - x_i, with
  //   d_i h + c_i h^2 = g_{i+1} - g_i   (interpolation)
  //   d_{i+1} = d_i + 2 c_i h           (C^1)
  // Q'' continuity across x_1 pins d_0 = (3 dg_0 - dg_1) / (2h).
  double d = (3.0 * (g[1] - g[0]) - (g[2] - g[1])) / (2.0 * h);
  for (int i = 0; i < n - 1; ++i) {
    const double dg = g[i + 1] - g[i];
    const double c = (dg - d * h) / (h * h);
    W[i + 1] = W[i] + g[i] * h + 0.5 * d * h * h + c * h * h * h / 3.0;
    d += 2.0 * c * h;
  }
}

}  // namespace perihyp::interp
