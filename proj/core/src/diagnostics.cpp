#include "perihyp/diagnostics.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>

#include "perihyp/characteristics.hpp"
#include "perihyp/interp.hpp"
#include "perihyp/operators.hpp"
#include "perihyp/parallel.hpp"
#include "perihyp/tracesolve.hpp"
#include "perihyp/trig.hpp"

namespace perihyp {

namespace {

/// State values of (u0, aux0) sampled at one x for all time nodes, for
/// diagonal-coefficient evaluation on the grid circle.
struct StateColumns {
  std::vector<std::vector<double>> u;    // [c][i]
  std::vector<std::vector<double>> aux;  // [a][i]
};

StateColumns sample_state(const TransportProblem& p, double lambda, const Field& u0,
                          const Field& aux0, double x) {
  const auto& g = u0.grid();
  StateColumns s;
  s.u.assign(u0.ncomp(), std::vector<double>(g.nt));
  const int naux = aux0.empty() ? 0 : aux0.ncomp();
  s.aux.assign(naux, std::vector<double>(g.nt));
  std::vector<double> M(g.nx);
  for (int c = 0; c < u0.ncomp(); ++c)
    for (int i = 0; i < g.nt; ++i) {
      auto row = u0.row(c, i);
      interp::spline_moments(row, g.hx(), M);
      s.u[c][i] = interp::spline_eval(row, M, g.hx(), x);
    }
  for (int c = 0; c < naux; ++c)
    for (int i = 0; i < g.nt; ++i) {
      auto row = aux0.row(c, i);
      interp::spline_moments(row, g.hx(), M);
      s.aux[c][i] = interp::spline_eval(row, M, g.hx(), x);
    }
  (void)lambda;
  (void)p;
  return s;
}

/// Diagonal source coefficient b0_j on the time circle at one x.
std::vector<double> diag_column(const TransportProblem& p, double lambda, const Field& u0,
                                const Field& aux0, int j, double x) {
  const auto& g = u0.grid();
  const StateColumns s = sample_state(p, lambda, u0, aux0, x);
  std::vector<double> col(g.nt), ubuf(p.dim()), abuf(p.aux_count());
  for (int i = 0; i < g.nt; ++i) {
    for (int c = 0; c < p.dim(); ++c) ubuf[c] = s.u[c][i];
    for (int c = 0; c < p.aux_count(); ++c) abuf[c] = s.aux[c][i];
    col[i] = p.diag_coeff(j, g.t(i), x, lambda, StatePoint{ubuf, abuf});
  }
  return col;
}

double max_abs_coupling(const TransportProblem& p, int j, int k, double lambda, int nt) {
  double m = 0.0;
  for (int i = 0; i < nt; ++i)
    m = std::max(m, std::abs(p.coupling().r(j, k, kTwoPi * i / nt, lambda)));
  return m;
}

}  // namespace

std::pair<double, double> nonresonance_RS(const TransportProblem& p, const Field& u0,
                                          double lambda) {
  if (p.coupling().kind() != BoundaryCoupling::Kind::reflection)
    throw std::invalid_argument("nonresonance_RS: reflection coupling required");
  const int n = p.dim(), m = p.lower_count();
  const auto& g = u0.grid();
  const Field aux0 = p.make_aux(lambda, u0);
  const LineQuadrature quad = LineQuadrature::for_grid(g.nx);

  // Pointwise extrema over the time nodes of b0_j / a_j at each quadrature x.
  std::vector<std::vector<double>> lo(n, std::vector<double>(quad.points())),
      hi(n, std::vector<double>(quad.points()));
  parallel_for(0, n, [&](int j) {
    for (int gq = 0; gq < quad.points(); ++gq) {
      const double x = quad.node(gq);
      const std::vector<double> col = diag_column(p, lambda, u0, aux0, j, x);
      const double a = p.speed(j, x, lambda);
      double cmin = col[0] / a, cmax = col[0] / a;
      for (double v : col) {
        cmin = std::min(cmin, v / a);
        cmax = std::max(cmax, v / a);
      }
      lo[j][gq] = cmin;
      hi[j][gq] = cmax;
    }
  });
  auto exponent = [&](int k, int j) {
    // int_0^1 max_{t,s} (b0_k/a_k - b0_j/a_j) dx
    double acc = 0.0;
    for (int gq = 0; gq < quad.points(); ++gq)
      acc += quad.weight(gq) * (hi[k][gq] - lo[j][gq]);
    return acc;
  };

  double R = 0.0;
  for (int j = 0; j < m; ++j) {
    double sum = 0.0;
    for (int k = m; k < n; ++k)
      for (int l = 0; l < m; ++l)
        sum += max_abs_coupling(p, j, k, lambda, g.nt) *
               max_abs_coupling(p, k, l, lambda, g.nt) * std::exp(exponent(k, j));
    R = std::max(R, sum);
  }
  double S = 0.0;
  for (int j = m; j < n; ++j) {
    double sum = 0.0;
    for (int k = 0; k < m; ++k)
      for (int l = m; l < n; ++l)
        sum += max_abs_coupling(p, j, k, lambda, g.nt) *
               max_abs_coupling(p, k, l, lambda, g.nt) * std::exp(exponent(j, k));
    S = std::max(S, sum);
  }
  return {R, S};
}

std::pair<std::vector<double>, std::vector<double>> nonresonance_R0S0(
    const TransportProblem& p, const Field& u0, double lambda) {
  if (p.dim() != 2 || p.lower_count() != 1)
    throw std::invalid_argument("nonresonance_R0S0: requires m = 1, n = 2");
  const auto& g = u0.grid();
  const int nt = g.nt;
  const Field aux0 = p.make_aux(lambda, u0);
  const LineQuadrature quad = LineQuadrature::for_grid(g.nx);
  CharTable chars(p, lambda, quad);

  // Damping exponents with characteristic time shifts, as node columns:
  //   E+_j(t) = int_0^1 b0_j(t + P_j(x), x) / a_j(x) dx      (R0)
  //   E-_j(t) = int_0^1 b0_j(t - (P_j(1) - P_j(x)), x) / a_j(x) dx   (S0)
  std::vector<std::vector<double>> eplus(2, std::vector<double>(nt, 0.0)),
      eminus(2, std::vector<double>(nt, 0.0));
  for (int j = 0; j < 2; ++j) {
    std::vector<double> shifted(nt);
    for (int gq = 0; gq < quad.points(); ++gq) {
      const double x = quad.node(gq);
      const std::vector<double> col = diag_column(p, lambda, u0, aux0, j, x);
      const double ia = chars.inv_speed(j, gq);
      trig::shift(col, chars.P_quad(j, gq), shifted);
      for (int i = 0; i < nt; ++i) eplus[j][i] += quad.weight(gq) * shifted[i] * ia;
      trig::shift(col, chars.P_quad(j, gq) - chars.P_full(j), shifted);
      for (int i = 0; i < nt; ++i) eminus[j][i] += quad.weight(gq) * shifted[i] * ia;
    }
  }

  std::vector<double> r12(nt), r21(nt), r21s(nt), r12s(nt);
  for (int i = 0; i < nt; ++i) {
    r12[i] = p.coupling().r(0, 1, g.t(i), lambda);
    r21[i] = p.coupling().r(1, 0, g.t(i), lambda);
  }
  trig::shift(r21, chars.P_full(1), r21s);   // r21(t + int_0^1 dxi/a_2)
  trig::shift(r12, -chars.P_full(0), r12s);  // r12(t - int_0^1 dxi/a_1)

  std::vector<double> R0(nt), S0(nt);
  for (int i = 0; i < nt; ++i) {
    R0[i] = std::abs(r12[i] * r21s[i]) * std::exp(eplus[1][i] - eplus[0][i]);
    S0[i] = std::abs(r21[i] * r12s[i]) * std::exp(eminus[1][i] - eminus[0][i]);
  }
  return {R0, S0};
}

std::pair<std::vector<double>, std::vector<double>> wave_R0S0(const WaveProblem& wp,
                                                              const Field& u0) {
  const auto& g = u0.grid();
  const int nt = g.nt;
  const LineQuadrature quad = LineQuadrature::for_grid(g.nx);

  const Field ut = u0.time_derivative(1);
  // b1 = d5b, b2 = d6b at the reference state (nodal columns per x sample).
  auto coeff_column = [&](const WaveProblem::Source& d, double x) {
    std::vector<double> col(nt), M(g.nx);
    for (int i = 0; i < nt; ++i) {
      auto row = u0.row(0, i);
      interp::spline_moments(row, g.hx(), M);
      const double uv = interp::spline_eval(row, M, g.hx(), x);
      const double qv = interp::spline_deriv(row, M, g.hx(), x);
      auto trow = ut.row(0, i);
      interp::spline_moments(trow, g.hx(), M);
      const double pv = interp::spline_eval(trow, M, g.hx(), x);
      col[i] = d(g.t(i), x, 0.0, uv, pv, qv);
    }
    return col;
  };

  // Travel time of the wave characteristic: P(x) = int_0^x dxi / a(xi, 0).
  std::vector<double> P(quad.points());
  {
    double acc = 0.0;
    int gq = 0;
    for (int pnl = 0; pnl < quad.panels(); ++pnl) {
      for (int gg = 0; gg < 4; ++gg, ++gq) {
        double part = 0.0;
        for (int h = 0; h < 4; ++h) {
          const double xh = quad.node(pnl * 4 + h);
          part += quad.partial(gg, h) / wp.a(xh, 0.0);
        }
        P[gq] = acc + part * quad.panel_width();
      }
      double full = 0.0;
      for (int h = 0; h < 4; ++h) {
        const double xh = quad.node(pnl * 4 + h);
        full += quad.ref_weight(h) / wp.a(xh, 0.0);
      }
      acc += full * quad.panel_width();
    }
    P.push_back(acc);  // P(1) at the back
  }
  const double P1 = P.back();

  std::vector<double> R0(nt, 0.0), S0(nt, 0.0), sh(nt);
  for (int gq = 0; gq < quad.points(); ++gq) {
    const double x = quad.node(gq);
    const double a = wp.a(x, 0.0);
    const std::vector<double> b1 = coeff_column(wp.d5b, x);
    const std::vector<double> b2 = coeff_column(wp.d6b, x);
    const double w = quad.weight(gq);
    // R0: arguments t -+ P(x).
    trig::shift(b1, -P[gq], sh);
    for (int i = 0; i < nt; ++i) R0[i] += w * sh[i] / a;
    trig::shift(b1, +P[gq], sh);
    for (int i = 0; i < nt; ++i) R0[i] += w * sh[i] / a;
    trig::shift(b2, -P[gq], sh);
    for (int i = 0; i < nt; ++i) R0[i] += w * sh[i] / (a * a);
    trig::shift(b2, +P[gq], sh);
    for (int i = 0; i < nt; ++i) R0[i] -= w * sh[i] / (a * a);
    // S0: arguments t +- (P(1) - P(x)).
    trig::shift(b1, P1 - P[gq], sh);
    for (int i = 0; i < nt; ++i) S0[i] += w * sh[i] / a;
    trig::shift(b1, -(P1 - P[gq]), sh);
    for (int i = 0; i < nt; ++i) S0[i] += w * sh[i] / a;
    trig::shift(b2, P1 - P[gq], sh);
    for (int i = 0; i < nt; ++i) S0[i] += w * sh[i] / (a * a);
    trig::shift(b2, -(P1 - P[gq]), sh);
    for (int i = 0; i < nt; ++i) S0[i] -= w * sh[i] / (a * a);
  }
  return {R0, S0};
}

double telegraph_check(const WaveProblem& wp) {
  const LineQuadrature quad = LineQuadrature::for_grid(128);
  double acc = 0.0;
  for (int gq = 0; gq < quad.points(); ++gq) {
    const double x = quad.node(gq);
    acc += quad.weight(gq) * wp.d5b(0.0, x, 0.0, 0.0, 0.0, 0.0) / wp.a(x, 0.0);
  }
  return 2.0 * acc;
}

BcContractionReport bc_contraction_check(const TransportProblem& p, const Field& u0,
                                         double lambda) {
  const int n = p.dim(), m = p.lower_count();
  const auto& g = u0.grid();
  const int nt = g.nt;
  BcContractionReport rep;
  rep.row_sums.assign(n, 0.0);
  rep.sign_margins.assign(n, 0.0);

  for (int j = 0; j < n; ++j) {
    double sum = 0.0;
    if (p.coupling().kind() == BoundaryCoupling::Kind::reflection) {
      for (int k = 0; k < n; ++k) sum += max_abs_coupling(p, j, k, lambda, nt);
    } else {
      const int alpha = (j < m) ? 0 : 1;
      for (int k = 0; k < n; ++k) {
        double m0 = 0.0, m1 = 0.0;
        for (int i = 0; i < nt; ++i) {
          m0 = std::max(m0, std::abs(p.coupling().rblock(alpha, 0, j, k, g.t(i), lambda)));
          m1 = std::max(m1, std::abs(p.coupling().rblock(alpha, 1, j, k, g.t(i), lambda)));
        }
        sum += m0 + m1;
      }
    }
    rep.row_sums[j] = sum;
  }

  const Field aux0 = p.make_aux(lambda, u0);
  for (int j = 0; j < n; ++j) {
    // min (for j < m) or -max (for j >= m) of b0_j / a_j over (t, x) samples.
    double margin = std::numeric_limits<double>::infinity();
    for (int q = 0; q < g.nx; ++q) {
      const double x = g.x(q);
      const std::vector<double> col = diag_column(p, lambda, u0, aux0, j, x);
      const double a = p.speed(j, x, lambda);
      for (double v : col) {
        const double ratio = v / a;
        margin = std::min(margin, (j < m) ? ratio : -ratio);
      }
    }
    rep.sign_margins[j] = margin;
  }

  rep.row_sums_ok = true;
  rep.sign_condition_ok = true;
  for (int j = 0; j < n; ++j) {
    if (!(rep.row_sums[j] < 1.0)) {
      rep.row_sums_ok = false;
      if (rep.worst_row < 0 || rep.row_sums[j] > rep.row_sums[rep.worst_row]) rep.worst_row = j;
    }
    if (!(rep.sign_margins[j] > 0.0)) rep.sign_condition_ok = false;
  }
  rep.passed = rep.row_sums_ok;
  return rep;
}

CoercivityReport coercivity(const TransportProblem& p, double lambda, const Field& u0,
                            const DiagnosticThresholds& thr) {
  const auto& g = u0.grid();
  if (g.nt > 24 || g.nx > 24)
    throw std::invalid_argument("coercivity: dense assembly restricted to grids <= 24x24");
  OperatorSet ops(p, lambda, u0);
  const Eigen::MatrixXd A = assemble_dense(ops, true, true);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  CoercivityReport rep;
  rep.sigma_max = sv(0);
  rep.sigma_min = sv(sv.size() - 1);
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) < thr.sigma_floor_rel * rep.sigma_max) ++rep.kernel_dim;
  return rep;
}

ResonanceTable resonance_scan(const TransportProblem& p, const Field& u0, double lo, double hi,
                              int steps, const DiagnosticThresholds& thr) {
  if (steps < 1) throw std::invalid_argument("resonance_scan: steps must be positive");
  ResonanceTable table;
  table.thresholds = thr;
  table.rows.resize(steps + 1);
  const bool reflection = p.coupling().kind() == BoundaryCoupling::Kind::reflection;
  parallel_for(0, steps + 1, [&](int i) {
    const double lambda = (steps == 0) ? lo : lo + (hi - lo) * i / steps;
    ResonanceRow row;
    row.lambda = lambda;
    OperatorSet ops(p, lambda, u0);
    TraceSolver trace(ops);
    const TraceCondition c = trace.condition();
    row.sigma_min = c.sigma_min;
    row.sigma_min_rel = c.sigma_min_rel;
    row.cond = c.cond;
    row.min_mode_multiplier = c.min_mode_multiplier;
    if (reflection) {
      auto [R, S] = nonresonance_RS(p, u0, lambda);
      row.R = R;
      row.S = S;
      row.flag_rs = std::min(R, S) >= thr.rs_warning;
    }
    row.flag_sigma = row.sigma_min_rel < thr.sigma_floor_rel;
    row.flag_multiplier =
        row.min_mode_multiplier && *row.min_mode_multiplier < thr.multiplier_floor;
    table.rows[i] = std::move(row);
  });
  return table;
}

namespace {

DerivativeCheckReport check_entries(
    int rows, int cols,
    const std::function<double(int j, int k, const std::vector<double>&)>& supplied,
    const std::function<double(int j, int k, const std::vector<double>&, double h)>& fd,
    int samples, double tolerance,
    const std::function<std::vector<double>(std::mt19937&)>& sample_point) {
  DerivativeCheckReport rep;
  rep.tolerance = tolerance;
  rep.entries.reserve(rows * cols);
  std::mt19937 rng(20240901u);
  std::vector<std::vector<double>> points;
  points.reserve(samples);
  for (int s = 0; s < samples; ++s) points.push_back(sample_point(rng));
  for (int j = 0; j < rows; ++j)
    for (int k = 0; k < cols; ++k) {
      DerivativeCheckEntry e{j, k, 0.0};
      for (const auto& pt : points) {
        const double ref = supplied(j, k, pt);
        const double approx = fd(j, k, pt, 1e-6);
        const double err = std::abs(ref - approx) / (1.0 + std::abs(ref));
        e.max_rel_error = std::max(e.max_rel_error, err);
      }
      rep.max_rel_error = std::max(rep.max_rel_error, e.max_rel_error);
      rep.entries.push_back(e);
    }
  rep.passed = rep.max_rel_error <= tolerance;
  return rep;
}

}  // namespace

DerivativeCheckReport derivative_consistency(const FirstOrderProblem& p, int samples,
                                             double tolerance) {
  const int n = p.dim();
  auto sample_point = [n](std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> pt(3 + n);
    pt[0] = kTwoPi * 0.5 * (dist(rng) + 1.0);  // t
    pt[1] = 0.5 * (dist(rng) + 1.0);           // x
    pt[2] = 0.4 * dist(rng);                   // lambda
    for (int c = 0; c < n; ++c) pt[3 + c] = dist(rng);
    return pt;
  };
  auto supplied = [&](int j, int k, const std::vector<double>& pt) {
    std::span<const double> u(pt.data() + 3, static_cast<size_t>(n));
    return p.db(j, k, pt[0], pt[1], pt[2], u);
  };
  auto fd = [&](int j, int k, const std::vector<double>& pt, double h) {
    std::vector<double> up(pt.begin() + 3, pt.end()), dn = up;
    up[k] += h;
    dn[k] -= h;
    return (p.b(j, pt[0], pt[1], pt[2], up) - p.b(j, pt[0], pt[1], pt[2], dn)) / (2.0 * h);
  };
  return check_entries(n, n, supplied, fd, samples, tolerance, sample_point);
}

DerivativeCheckReport derivative_consistency(const WaveProblem& p, int samples,
                                             double tolerance) {
  auto sample_point = [](std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> pt(6);
    pt[0] = kTwoPi * 0.5 * (dist(rng) + 1.0);  // t
    pt[1] = 0.5 * (dist(rng) + 1.0);           // x
    pt[2] = 0.4 * dist(rng);                   // lambda
    for (int c = 3; c < 6; ++c) pt[c] = dist(rng);
    return pt;
  };
  auto supplied = [&](int, int k, const std::vector<double>& pt) {
    const auto& d = (k == 0) ? p.d4b : (k == 1) ? p.d5b : p.d6b;
    return d(pt[0], pt[1], pt[2], pt[3], pt[4], pt[5]);
  };
  auto fd = [&](int, int k, const std::vector<double>& pt, double h) {
    std::vector<double> up = pt, dn = pt;
    up[3 + k] += h;
    dn[3 + k] -= h;
    return (p.b(up[0], up[1], up[2], up[3], up[4], up[5]) -
            p.b(dn[0], dn[1], dn[2], dn[3], dn[4], dn[5])) /
           (2.0 * h);
  };
  return check_entries(1, 3, supplied, fd, samples, tolerance, sample_point);
}

}  // namespace perihyp
