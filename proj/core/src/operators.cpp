#include "perihyp/operators.hpp"

#include <cmath>

#include "perihyp/interp.hpp"
#include "perihyp/parallel.hpp"
#include "perihyp/trig.hpp"

namespace perihyp {

using detail::ColMat;
using detail::ExponentTables;
using detail::SampledField;

OperatorSet::OperatorSet(const TransportProblem& p, double lambda, Field u0)
    : p_(&p),
      lambda_(lambda),
      u0_(std::move(u0)),
      chars_(p, lambda, LineQuadrature::for_grid(u0_.grid().nx)) {
  const int n = p.dim();
  const int nt = grid().nt;
  const int nq = chars_.quad().points();
  const int naux = p.aux_count();

  // Coupling entries at the time nodes.
  if (p.coupling().kind() == BoundaryCoupling::Kind::reflection) {
    r_.resize(n * n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        r_[idx(j, k)].v.resize(nt);
        for (int i = 0; i < nt; ++i)
          r_[idx(j, k)].v[i] = p.coupling().r(j, k, grid().t(i), lambda_);
      }
  } else {
    rblk_.resize(4 * n * n);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            auto& col = rblk_[((a * 2 + b) * n + j) * n + k];
            col.v.resize(nt);
            for (int i = 0; i < nt; ++i)
              col.v[i] = p.coupling().rblock(a, b, j, k, grid().t(i), lambda_);
          }
  }

  const SampledField s0 = sample(u0_);
  frozen_ = build_exponents(s0);

  // Frozen linearization coefficients of the source at the quadrature points.
  lin_u_.assign(static_cast<size_t>(n) * n, ColMat(nq, nt));
  lin_aux_.assign(static_cast<size_t>(n) * std::max(1, naux), ColMat(nq, nt));
  std::vector<double> ubuf(n), abuf(naux), cu(n), ca(naux);
  for (int j = 0; j < n; ++j)
    for (int g = 0; g < nq; ++g) {
      const double xg = chars_.quad().node(g);
      for (int i = 0; i < nt; ++i) {
        for (int c = 0; c < n; ++c) ubuf[c] = s0.u[c].col(g)[i];
        for (int c = 0; c < naux; ++c) abuf[c] = s0.aux[c].col(g)[i];
        const StatePoint sp{ubuf, abuf};
        p.linearized_source(j, grid().t(i), xg, lambda_, sp, cu, ca);
        for (int k = 0; k < n; ++k) lin_u_[idx(j, k)].col(g)[i] = cu[k];
        for (int a = 0; a < naux; ++a) lin_aux_[j * naux + a].col(g)[i] = ca[a];
      }
    }
}

std::span<const double> OperatorSet::coupling_block_col(int alpha, int beta, int j,
                                                        int k) const {
  const int n = p_->dim();
  return rblk_[((alpha * 2 + beta) * n + j) * n + k].colview();
}

SampledField OperatorSet::sample(const Field& f) const {
  const int n = f.ncomp();
  const int nt = grid().nt;
  const int nx = grid().nx;
  const int nq = chars_.quad().points();
  SampledField out;
  out.u.assign(n, ColMat(nq, nt));
  const Field aux = p_->make_aux(lambda_, f);
  const int naux = aux.empty() ? 0 : aux.ncomp();
  out.aux.assign(naux, ColMat(nq, nt));

  std::vector<double> xs(nq);
  for (int g = 0; g < nq; ++g) xs[g] = chars_.quad().node(g);

  auto sample_one = [&](const Field& src, ColMat& dst, int c) {
    std::vector<double> M(nx), vals(nq);
    for (int i = 0; i < nt; ++i) {
      auto row = src.row(c, i);
      interp::spline_moments(row, grid().hx(), M);
      for (int g = 0; g < nq; ++g)
        vals[g] = interp::spline_eval(row, M, grid().hx(), xs[g]);
      for (int g = 0; g < nq; ++g) dst.col(g)[i] = vals[g];
    }
  };
  parallel_for(0, n + naux, [&](int slot) {
    if (slot < n)
      sample_one(f, out.u[slot], slot);
    else
      sample_one(aux, out.aux[slot - n], slot - n);
  });
  return out;
}

ExponentTables OperatorSet::build_exponents(const SampledField& v) const {
  const int n = p_->dim();
  const int nt = grid().nt;
  const int nx = grid().nx;
  const auto& quad = chars_.quad();
  const int nq = quad.points();
  const int naux = static_cast<int>(v.aux.size());

  ExponentTables t;
  t.beta.assign(n, ColMat(nq, nt));
  t.q_quad.assign(n, ColMat(nq, nt));
  t.q_grid.assign(n, ColMat(nx, nt));

  parallel_for(0, n, [&](int j) {
    std::vector<double> ubuf(n), abuf(naux);
    // Nodal diagonal coefficient columns.
    for (int g = 0; g < nq; ++g) {
      const double xg = quad.node(g);
      auto col = t.beta[j].col(g);
      for (int i = 0; i < nt; ++i) {
        for (int c = 0; c < n; ++c) ubuf[c] = v.u[c].col(g)[i];
        for (int c = 0; c < naux; ++c) abuf[c] = v.aux[c].col(g)[i];
        col[i] = p_->diag_coeff(j, grid().t(i), xg, lambda_, StatePoint{ubuf, abuf});
      }
    }
    // Retarded integrand W(theta, eta) / a_j(eta) and its cumulative integral.
    ColMat z(nq, nt);
    std::vector<double> shifted(nt);
    for (int g = 0; g < nq; ++g) {
      trig::shift(t.beta[j].col(g), chars_.P_quad(j, g), shifted);
      const double ia = chars_.inv_speed(j, g);
      auto zc = z.col(g);
      for (int i = 0; i < nt; ++i) zc[i] = shifted[i] * ia;
    }
    std::vector<double> bnd(nt, 0.0);  // Q at current panel boundary
    const double w = quad.panel_width();
    const int per = quad.panels_per_interval();
    // Grid node 0 column stays zero.
    for (int pnl = 0; pnl < quad.panels(); ++pnl) {
      for (int g = 0; g < 4; ++g) {
        auto qc = t.q_quad[j].col(pnl * 4 + g);
        for (int i = 0; i < nt; ++i) {
          double part = 0.0;
          for (int h = 0; h < 4; ++h) part += quad.partial(g, h) * z.col(pnl * 4 + h)[i];
          qc[i] = bnd[i] + part * w;
        }
      }
      for (int i = 0; i < nt; ++i) {
        double full = 0.0;
        for (int h = 0; h < 4; ++h) full += quad.ref_weight(h) * z.col(pnl * 4 + h)[i];
        bnd[i] += full * w;
      }
      if ((pnl + 1) % per == 0) {
        auto qg = t.q_grid[j].col((pnl + 1) / per);
        for (int i = 0; i < nt; ++i) qg[i] = bnd[i];
      }
    }
  });
  return t;
}

// Boundary sum of component j as a function of theta = t - P_j(x); reads only
// the boundary time columns of u (empty columns count as zero).
std::vector<double> OperatorSet::calC_scol(int j,
                                           const std::vector<std::vector<double>>& bnd0,
                                           const std::vector<std::vector<double>>& bnd1) const {
  const int n = p_->dim();
  const int m = p_->lower_count();
  const int nt = grid().nt;
  const bool refl = p_->coupling().kind() == BoundaryCoupling::Kind::reflection;
  std::vector<double> s(nt, 0.0);
  if (refl) {
    if (j < m) {
      for (int k = m; k < n; ++k) {
        if (bnd0[k].empty()) continue;
        const auto rc = coupling_col(j, k);
        for (int i = 0; i < nt; ++i) s[i] += rc[i] * bnd0[k][i];
      }
    } else {
      for (int k = 0; k < m; ++k) {
        if (bnd1[k].empty()) continue;
        const auto rc = coupling_col(j, k);
        for (int i = 0; i < nt; ++i) s[i] += rc[i] * bnd1[k][i];
      }
      trig::shift(s, travel_full(j), s);
    }
  } else {
    const int alpha = (j < m) ? 0 : 1;
    for (int k = 0; k < n; ++k) {
      const auto r0 = coupling_block_col(alpha, 0, j, k);
      const auto r1 = coupling_block_col(alpha, 1, j, k);
      for (int i = 0; i < nt; ++i) {
        if (!bnd0[k].empty()) s[i] += r0[i] * bnd0[k][i];
        if (!bnd1[k].empty()) s[i] += r1[i] * bnd1[k][i];
      }
    }
    if (j >= m) trig::shift(s, travel_full(j), s);
  }
  return s;
}

// calC column of component j at grid node q, from the theta-indexed boundary sum.
void OperatorSet::calC_col_from_s(const ExponentTables& t, int j,
                                  const std::vector<double>& s, int q,
                                  std::span<double> out) const {
  const int nt = grid().nt;
  const int nx = grid().nx;
  const int m = p_->lower_count();
  const auto qg = t.q_grid[j].col(q);
  std::vector<double> bracket(nt);
  if (j < m) {
    for (int i = 0; i < nt; ++i) bracket[i] = std::exp(-qg[i]) * s[i];
  } else {
    const auto qfull = t.q_grid[j].col(nx - 1);
    for (int i = 0; i < nt; ++i) bracket[i] = std::exp(qfull[i] - qg[i]) * s[i];
  }
  trig::shift(bracket, -travel_to(j, q), out);
}

Field OperatorSet::apply_C_impl(const ExponentTables& t, const Field& u) const {
  const int n = p_->dim();
  const int nt = grid().nt;
  const int nx = grid().nx;
  Field out(grid(), n);
  std::vector<std::vector<double>> bnd0(n, std::vector<double>(nt)),
      bnd1(n, std::vector<double>(nt));
  for (int k = 0; k < n; ++k) {
    u.copy_column(k, 0, bnd0[k]);
    u.copy_column(k, nx - 1, bnd1[k]);
  }
  parallel_for(0, n, [&](int j) {
    const std::vector<double> s = calC_scol(j, bnd0, bnd1);
    std::vector<double> col(nt);
    for (int q = 0; q < nx; ++q) {
      calC_col_from_s(t, j, s, q, col);
      out.set_column(j, q, col);
    }
  });
  return out;
}

void OperatorSet::calC_boundary(const std::vector<std::vector<double>>& bnd0,
                                const std::vector<std::vector<double>>& bnd1,
                                std::vector<std::vector<double>>& out0,
                                std::vector<std::vector<double>>& out1) const {
  const int n = p_->dim();
  const int nt = grid().nt;
  const int nx = grid().nx;
  out0.assign(n, std::vector<double>(nt));
  out1.assign(n, std::vector<double>(nt));
  for (int j = 0; j < n; ++j) {
    const std::vector<double> s = calC_scol(j, bnd0, bnd1);
    calC_col_from_s(frozen_, j, s, 0, out0[j]);
    calC_col_from_s(frozen_, j, s, nx - 1, out1[j]);
  }
}

Field OperatorSet::apply_sourcecols(const ExponentTables& t,
                                    std::vector<ColMat>& fcols) const {
  const int n = p_->dim();
  const int m = p_->lower_count();
  const int nt = grid().nt;
  const int nx = grid().nx;
  const auto& quad = chars_.quad();
  const int per = quad.panels_per_interval();
  Field out(grid(), n);

  parallel_for(0, n, [&](int j) {
    ColMat& f = fcols[j];
    std::vector<double> shifted(nt);
    // Integrand along the characteristic: exp(Q) * f(theta + P) / a.
    for (int g = 0; g < quad.points(); ++g) {
      trig::shift(f.col(g), chars_.P_quad(j, g), shifted);
      const double ia = chars_.inv_speed(j, g);
      const auto qc = t.q_quad[j].col(g);
      auto fc = f.col(g);
      for (int i = 0; i < nt; ++i) fc[i] = std::exp(qc[i]) * shifted[i] * ia;
    }
    // Cumulative integral from x = 0, then shift each grid column back to t.
    std::vector<double> pref(nt, 0.0), last(nt, 0.0), bracket(nt);
    std::vector<std::vector<double>> at_grid(nx, std::vector<double>(nt, 0.0));
    for (int pnl = 0; pnl < quad.panels(); ++pnl) {
      for (int i = 0; i < nt; ++i) {
        double full = 0.0;
        for (int h = 0; h < 4; ++h) full += quad.ref_weight(h) * f.col(pnl * 4 + h)[i];
        pref[i] += full * quad.panel_width();
      }
      if ((pnl + 1) % per == 0) at_grid[(pnl + 1) / per] = pref;
    }
    last = at_grid[nx - 1];
    for (int q = 0; q < nx; ++q) {
      const auto qg = t.q_grid[j].col(q);
      const auto& I = at_grid[q];
      if (j < m) {
        for (int i = 0; i < nt; ++i) bracket[i] = std::exp(-qg[i]) * I[i];
      } else {
        for (int i = 0; i < nt; ++i) bracket[i] = std::exp(-qg[i]) * (I[i] - last[i]);
      }
      trig::shift(bracket, -travel_to(j, q), shifted);
      out.set_column(j, q, shifted);
    }
  });
  return out;
}

Field OperatorSet::apply_D_impl(const ExponentTables& t, const SampledField& su) const {
  const int n = p_->dim();
  const int nt = grid().nt;
  const auto& quad = chars_.quad();
  const int nq = quad.points();
  const int naux = static_cast<int>(su.aux.size());

  std::vector<ColMat> fcols(n, ColMat(nq, nt));
  parallel_for(0, n, [&](int j) {
    std::vector<double> ubuf(n), abuf(naux);
    for (int g = 0; g < nq; ++g) {
      const double xg = quad.node(g);
      const auto beta = t.beta[j].col(g);
      auto fc = fcols[j].col(g);
      for (int i = 0; i < nt; ++i) {
        for (int c = 0; c < n; ++c) ubuf[c] = su.u[c].col(g)[i];
        for (int c = 0; c < naux; ++c) abuf[c] = su.aux[c].col(g)[i];
        const double src = p_->source(j, grid().t(i), xg, lambda_, StatePoint{ubuf, abuf});
        fc[i] = beta[i] * su.u[j].col(g)[i] - src;
      }
    }
  });
  return apply_sourcecols(t, fcols);
}

Field OperatorSet::apply_calC(const Field& u) const { return apply_C_impl(frozen_, u); }

Field OperatorSet::apply_calD(const Field& w) const {
  const int n = p_->dim();
  const int nt = grid().nt;
  const auto& quad = chars_.quad();
  const int nq = quad.points();
  const int naux = p_->aux_count();
  const SampledField sw = sample(w);

  std::vector<ColMat> fcols(n, ColMat(nq, nt));
  parallel_for(0, n, [&](int j) {
    for (int g = 0; g < nq; ++g) {
      const auto beta = frozen_.beta[j].col(g);
      auto fc = fcols[j].col(g);
      const auto wj = sw.u[j].col(g);
      for (int i = 0; i < nt; ++i) fc[i] = beta[i] * wj[i];
      for (int k = 0; k < n; ++k) {
        const auto cu = lin_u_[idx(j, k)].col(g);
        const auto wk = sw.u[k].col(g);
        for (int i = 0; i < nt; ++i) fc[i] -= cu[i] * wk[i];
      }
      for (int a = 0; a < naux; ++a) {
        const auto ca = lin_aux_[j * naux + a].col(g);
        const auto wa = sw.aux[a].col(g);
        for (int i = 0; i < nt; ++i) fc[i] -= ca[i] * wa[i];
      }
    }
  });
  return apply_sourcecols(frozen_, fcols);
}

Field OperatorSet::apply_C(const Field& u, const Field& v) const {
  const ExponentTables t = build_exponents(sample(v));
  return apply_C_impl(t, u);
}

Field OperatorSet::apply_D(const Field& u, const Field& v) const {
  const ExponentTables t = build_exponents(sample(v));
  return apply_D_impl(t, sample(u));
}

Field OperatorSet::residual(const Field& u) const {
  Field r = u;
  r -= apply_C_impl(frozen_, u);
  r -= apply_D_impl(frozen_, sample(u));
  return r;
}

Eigen::MatrixXd assemble_dense(const OperatorSet& ops, bool include_calC, bool include_calD) {
  const auto& g = ops.grid();
  const int n = ops.problem().dim();
  const int N = n * g.nt * g.nx;
  Eigen::MatrixXd A(N, N);
  std::vector<int> cols(N);
  for (int k = 0; k < N; ++k) cols[k] = k;
  parallel_for(0, N, [&](int k) {
    Field e(g, n);
    e.raw()[k] = 1.0;
    Field img = e;
    if (include_calC) img -= ops.apply_calC(e);
    if (include_calD) img -= ops.apply_calD(e);
    for (int r = 0; r < N; ++r) A(r, k) = img.raw()[r];
  });
  return A;
}

Field apply_C(const TransportProblem& p, double lambda, const Field& v, const Field& u) {
  return OperatorSet(p, lambda, v).apply_calC(u);
}

Field apply_D(const TransportProblem& p, double lambda, const Field& u, const Field& v) {
  OperatorSet ops(p, lambda, v);
  return ops.apply_D(u, v);
}

Field apply_calC(const TransportProblem& p, double lambda, const Field& u0, const Field& u) {
  return OperatorSet(p, lambda, u0).apply_calC(u);
}

Field apply_calD(const TransportProblem& p, double lambda, const Field& u0, const Field& u) {
  return OperatorSet(p, lambda, u0).apply_calD(u);
}

Field residual_F(const TransportProblem& p, double lambda, const Field& u0, const Field& u) {
  return OperatorSet(p, lambda, u0).residual(u);
}

}  // namespace perihyp
