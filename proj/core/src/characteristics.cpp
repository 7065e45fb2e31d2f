#include "perihyp/characteristics.hpp"

#include <cmath>
#include <stdexcept>

#include "perihyp/errors.hpp"

namespace perihyp {

namespace {

constexpr double kSpeedFloor = 1e-12;

// 4-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 4> kRefNode = {
    0.5 - 0.43056815579702629, 0.5 - 0.16999052179242813,
    0.5 + 0.16999052179242813, 0.5 + 0.43056815579702629};
constexpr std::array<double, 4> kRefWeight = {
    0.5 * 0.34785484513745385, 0.5 * 0.65214515486254614,
    0.5 * 0.65214515486254614, 0.5 * 0.34785484513745385};

// Lagrange cardinal polynomial through the reference nodes, integrated 0..z.
double lagrange_integral(int h, double z) {
  // L_h(x) = prod_{i != h} (x - r_i) / (r_h - r_i); integrate the expanded cubic.
  double roots[3];
  int c = 0;
  double denom = 1.0;
  for (int i = 0; i < 4; ++i) {
    if (i == h) continue;
    roots[c++] = kRefNode[i];
    denom *= kRefNode[h] - kRefNode[i];
  }
  // (x-a)(x-b)(x-c) = x^3 - (a+b+c)x^2 + (ab+ac+bc)x - abc
  const double s1 = roots[0] + roots[1] + roots[2];
  const double s2 = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2];
  const double s3 = roots[0] * roots[1] * roots[2];
  const double val = z * z * z * z / 4.0 - s1 * z * z * z / 3.0 + s2 * z * z / 2.0 - s3 * z;
  return val / denom;
}

double speed_checked(const TransportProblem& p, int j, double x, double lambda) {
  const double a = p.speed(j, x, lambda);
  if (!std::isfinite(a) || std::abs(a) <= kSpeedFloor) throw SingularSpeedError(j, x, lambda);
  return a;
}

}  // namespace

LineQuadrature LineQuadrature::for_grid(int nx) {
  LineQuadrature q;
  const int intervals = nx - 1;
  q.per_interval_ = std::max(1, (32 + intervals - 1) / intervals);
  q.panels_ = intervals * q.per_interval_;
  q.width_ = 1.0 / q.panels_;
  q.nodes_.resize(q.points());
  q.weights_.resize(q.points());
  for (int pnl = 0; pnl < q.panels_; ++pnl)
    for (int g = 0; g < 4; ++g) {
      q.nodes_[pnl * 4 + g] = (pnl + kRefNode[g]) * q.width_;
      q.weights_[pnl * 4 + g] = kRefWeight[g] * q.width_;
    }
  for (int g = 0; g < 4; ++g) {
    q.ref_w_[g] = kRefWeight[g];
    for (int h = 0; h < 4; ++h) q.partial_[g][h] = lagrange_integral(h, kRefNode[g]);
  }
  return q;
}

CharTable::CharTable(const TransportProblem& p, double lambda, LineQuadrature quad)
    : p_(&p), lambda_(lambda), quad_(std::move(quad)) {
  const int n = p.dim();
  const int np = quad_.points();
  inv_a_.assign(n, std::vector<double>(np));
  P_quad_.assign(n, std::vector<double>(np));
  P_bnd_.assign(n, std::vector<double>(quad_.panels() + 1, 0.0));
  for (int j = 0; j < n; ++j) {
    for (int g = 0; g < np; ++g)
      inv_a_[j][g] = 1.0 / speed_checked(p, j, quad_.node(g), lambda);
    for (int pnl = 0; pnl < quad_.panels(); ++pnl) {
      double panel_sum = 0.0;
      for (int g = 0; g < 4; ++g) panel_sum += quad_.ref_weight(g) * inv_a_[j][pnl * 4 + g];
      P_bnd_[j][pnl + 1] = P_bnd_[j][pnl] + panel_sum * quad_.panel_width();
      for (int g = 0; g < 4; ++g) {
        double part = 0.0;
        for (int h = 0; h < 4; ++h) part += quad_.partial(g, h) * inv_a_[j][pnl * 4 + h];
        P_quad_[j][pnl * 4 + g] = P_bnd_[j][pnl] + part * quad_.panel_width();
      }
    }
  }
}

double CharTable::P(int j, double x) const {
  const double w = quad_.panel_width();
  int pnl = static_cast<int>(std::floor(x / w));
  pnl = std::clamp(pnl, 0, quad_.panels() - 1);
  const double lo = quad_.boundary(pnl);
  double acc = P_bnd_[j][pnl];
  const double len = x - lo;
  if (std::abs(len) > 0.0) {
    for (int g = 0; g < 4; ++g) {
      const double xg = lo + kRefNode[g] * len;
      acc += kRefWeight[g] * len / speed_checked(*p_, j, xg, lambda_);
    }
  }
  return acc;
}

namespace {

// Composite Gauss over [x, xi] of fn, with at least `min_panels` panels.
template <typename Fn>
double segment_quad(double x, double xi, int min_panels, Fn&& fn) {
  const double len = xi - x;
  if (len == 0.0) return 0.0;
  const int panels = std::max(min_panels, static_cast<int>(std::ceil(std::abs(len) * 32)));
  const double w = len / panels;
  double acc = 0.0;
  for (int pnl = 0; pnl < panels; ++pnl) {
    const double lo = x + pnl * w;
    for (int g = 0; g < 4; ++g) acc += kRefWeight[g] * w * fn(lo + kRefNode[g] * w);
  }
  return acc;
}

}  // namespace

double tau(const TransportProblem& p, int j, double t, double x, double xi, double lambda) {
  return t + travel_time(p, j, x, xi, lambda);
}

double travel_time(const TransportProblem& p, int j, double x, double xi, double lambda) {
  return segment_quad(x, xi, 8,
                      [&](double eta) { return 1.0 / speed_checked(p, j, eta, lambda); });
}

double damping(const TransportProblem& p, int j, double t, double x, double xi, double lambda,
               const Field& v) {
  const Field aux = p.make_aux(lambda, v);
  const int n = p.dim();
  const int na = p.aux_count();
  std::vector<double> uvals(n), avals(na);
  const double expo = segment_quad(x, xi, 8, [&](double eta) {
    const double te = tau(p, j, t, x, eta, lambda);
    for (int c = 0; c < n; ++c) uvals[c] = v.eval(c, te, eta);
    for (int c = 0; c < na; ++c) avals[c] = aux.eval(c, te, eta);
    const StatePoint sp{uvals, avals};
    return p.diag_coeff(j, te, eta, lambda, sp) / speed_checked(p, j, eta, lambda);
  });
  return std::exp(expo);
}

}  // namespace perihyp
