#include "perihyp/tracesolve.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "perihyp/errors.hpp"
#include "perihyp/parallel.hpp"

namespace perihyp {

namespace {

bool is_circulant(const Eigen::MatrixXd& M, int nt) {
  if (M.rows() != nt) return false;
  double scale = 1.0;
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < nt; ++j) scale = std::max(scale, std::abs(M(i, j)));
  for (int i = 1; i < nt; ++i)
    for (int j = 0; j < nt; ++j)
      if (std::abs(M(i, j) - M(0, ((j - i) % nt + nt) % nt)) > 1e-9 * scale) return false;
  return true;
}

}  // namespace

TraceSolver::TraceSolver(const OperatorSet& ops) : ops_(&ops) {
  const auto& p = ops.problem();
  const int m = p.lower_count();
  const int n = p.dim();
  if (p.coupling().kind() == BoundaryCoupling::Kind::general) {
    reductions_.push_back(build(Reduction::Side::both));
  } else if (m == 0 || m == n) {
    reductions_.push_back(build(Reduction::Side::identity));
  } else {
    reductions_.push_back(build(Reduction::Side::lower));
    reductions_.push_back(build(Reduction::Side::upper));
    chosen_ = (reductions_[0].info.sigma_min_rel >= reductions_[1].info.sigma_min_rel) ? 0 : 1;
  }
  auto& r = reductions_[chosen_];
  if (r.side != Reduction::Side::identity) r.lu.compute(r.M);
}

void TraceSolver::apply_map(const Reduction& r, const Eigen::VectorXd& in,
                            Eigen::VectorXd& out) const {
  const auto& p = ops_->problem();
  const int n = p.dim();
  const int m = p.lower_count();
  const int nt = ops_->grid().nt;
  Cols bnd0(n), bnd1(n), out0, out1;
  auto scatter = [&](const Eigen::VectorXd& v) {
    for (size_t b = 0; b < r.blocks.size(); ++b) {
      auto [k, beta] = r.blocks[b];
      auto& dst = (beta == 0) ? bnd0[k] : bnd1[k];
      dst.assign(v.data() + b * nt, v.data() + (b + 1) * nt);
    }
  };
  auto gather = [&](Eigen::VectorXd& v) {
    for (size_t b = 0; b < r.blocks.size(); ++b) {
      auto [k, beta] = r.blocks[b];
      const auto& src = (beta == 0) ? out0[k] : out1[k];
      for (int i = 0; i < nt; ++i) v(b * nt + i) = src[i];
    }
  };
  out.resize(in.size());
  switch (r.side) {
    case Reduction::Side::identity:
      out = in;
      return;
    case Reduction::Side::both:
      scatter(in);
      ops_->calC_boundary(bnd0, bnd1, out0, out1);
      gather(out);
      return;
    case Reduction::Side::lower: {
      // traces v at x=1 (components < m)  ->  w at x=0  ->  hat v at x=1.
      scatter(in);
      ops_->calC_boundary(bnd0, bnd1, out0, out1);
      Cols mid0(n), mid1(n);
      for (int k = m; k < n; ++k) mid0[k] = out0[k];
      ops_->calC_boundary(mid0, mid1, out0, out1);
      gather(out);
      return;
    }
    case Reduction::Side::upper: {
      scatter(in);
      ops_->calC_boundary(bnd0, bnd1, out0, out1);
      Cols mid0(n), mid1(n);
      for (int k = 0; k < m; ++k) mid1[k] = out1[k];
      ops_->calC_boundary(mid0, mid1, out0, out1);
      gather(out);
      return;
    }
  }
}

TraceSolver::Reduction TraceSolver::build(Reduction::Side side) const {
  const auto& p = ops_->problem();
  const int n = p.dim();
  const int m = p.lower_count();
  const int nt = ops_->grid().nt;
  Reduction r;
  r.side = side;
  switch (side) {
    case Reduction::Side::identity: break;
    case Reduction::Side::lower:
      for (int l = 0; l < m; ++l) r.blocks.emplace_back(l, 1);
      break;
    case Reduction::Side::upper:
      for (int l = m; l < n; ++l) r.blocks.emplace_back(l, 0);
      break;
    case Reduction::Side::both:
      for (int k = 0; k < n; ++k) r.blocks.emplace_back(k, 0);
      for (int k = 0; k < n; ++k) r.blocks.emplace_back(k, 1);
      break;
  }
  const int size = static_cast<int>(r.blocks.size()) * nt;
  if (size > 0) {
    r.M.resize(size, size);
    std::vector<Eigen::VectorXd> cols(size);
    parallel_for(0, size, [&](int c) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(size);
      e(c) = 1.0;
      Eigen::VectorXd img;
      apply_map(r, e, img);
      cols[c] = std::move(img);
    });
    for (int c = 0; c < size; ++c) r.M.col(c) = -cols[c];
    r.M.diagonal().array() += 1.0;
  }
  finish(r);
  return r;
}

void TraceSolver::finish(Reduction& r) const {
  TraceCondition& c = r.info;
  c.size = static_cast<int>(r.M.rows());
  switch (r.side) {
    case Reduction::Side::lower: c.side = "lower"; break;
    case Reduction::Side::upper: c.side = "upper"; break;
    case Reduction::Side::both: c.side = "both"; break;
    case Reduction::Side::identity: c.side = "identity"; break;
  }
  if (r.side == Reduction::Side::identity || c.size == 0) {
    c.sigma_min = c.sigma_max = c.cond = 1.0;
    c.sigma_min_rel = 1.0;
    c.side = "identity";
    return;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(r.M);
  const auto& sv = svd.singularValues();
  c.sigma_max = sv(0);
  c.sigma_min = sv(sv.size() - 1);
  // Scale against the identity part as well: at exact resonance with unit
  // coupling the whole matrix collapses to zero and sigma_max is no scale.
  c.sigma_min_rel = c.sigma_min / std::max(1.0, c.sigma_max);
  c.cond = (c.sigma_min > 0.0) ? c.sigma_max / c.sigma_min
                               : std::numeric_limits<double>::infinity();

  // Mode multipliers for the single-unknown circulant case.
  const int nt = ops_->grid().nt;
  if (r.blocks.size() == 1 && is_circulant(r.M, nt)) {
    const double dt = kTwoPi / nt;
    double minmult = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= nt / 2 - 1; ++k) {
      std::complex<double> mu{0.0, 0.0};
      for (int pp = 0; pp < nt; ++pp)
        mu += r.M(0, pp) * std::exp(std::complex<double>(0.0, k * pp * dt));
      minmult = std::min(minmult, std::abs(mu));
    }
    c.min_mode_multiplier = minmult;
    double zero = 0.0;
    for (int pp = 0; pp < nt; ++pp) zero += r.M(0, pp);
    c.zero_mode_multiplier = std::abs(zero);
  }
}

Field TraceSolver::solve(const Field& f) const {
  const auto& red = chosen();
  if (red.side != Reduction::Side::identity && resonant())
    throw ResonanceError(ops_->lambda(), red.info.sigma_min_rel);
  if (red.side == Reduction::Side::identity) return f;

  const auto& p = ops_->problem();
  const int n = p.dim();
  const int m = p.lower_count();
  const auto& g = ops_->grid();
  const int nt = g.nt, nx = g.nx;

  Cols f0(n, std::vector<double>(nt)), f1(n, std::vector<double>(nt));
  for (int k = 0; k < n; ++k) {
    f.copy_column(k, 0, f0[k]);
    f.copy_column(k, nx - 1, f1[k]);
  }

  const int size = static_cast<int>(red.blocks.size()) * nt;
  Eigen::VectorXd rhs(size);
  Cols in0(n), in1(n), out0, out1;
  switch (red.side) {
    case Reduction::Side::lower:
      // rhs_j = f1_j + (calC of the f-columns at x=0 for components >= m)_j.
      for (int k = m; k < n; ++k) in0[k] = f0[k];
      break;
    case Reduction::Side::upper:
      for (int k = 0; k < m; ++k) in1[k] = f1[k];
      break;
    case Reduction::Side::both: break;
    case Reduction::Side::identity: break;
  }
  if (red.side == Reduction::Side::both) {
    for (size_t b = 0; b < red.blocks.size(); ++b) {
      auto [k, beta] = red.blocks[b];
      const auto& src = (beta == 0) ? f0[k] : f1[k];
      for (int i = 0; i < nt; ++i) rhs(b * nt + i) = src[i];
    }
  } else {
    ops_->calC_boundary(in0, in1, out0, out1);
    for (size_t b = 0; b < red.blocks.size(); ++b) {
      auto [k, beta] = red.blocks[b];
      const auto& base = (beta == 0) ? f0[k] : f1[k];
      const auto& corr = (beta == 0) ? out0[k] : out1[k];
      for (int i = 0; i < nt; ++i) rhs(b * nt + i) = base[i] + corr[i];
    }
  }

  const Eigen::VectorXd z = red.lu.solve(rhs);

  // Boundary columns of the solution.
  Cols bnd0(n), bnd1(n);
  for (size_t b = 0; b < red.blocks.size(); ++b) {
    auto [k, beta] = red.blocks[b];
    auto& dst = (beta == 0) ? bnd0[k] : bnd1[k];
    dst.assign(z.data() + b * nt, z.data() + (b + 1) * nt);
  }
  if (red.side == Reduction::Side::lower) {
    ops_->calC_boundary(bnd0, bnd1, out0, out1);
    for (int k = m; k < n; ++k) {
      bnd0[k] = out0[k];
      for (int i = 0; i < nt; ++i) bnd0[k][i] += f0[k][i];
    }
  } else if (red.side == Reduction::Side::upper) {
    ops_->calC_boundary(bnd0, bnd1, out0, out1);
    for (int k = 0; k < m; ++k) {
      bnd1[k] = out1[k];
      for (int i = 0; i < nt; ++i) bnd1[k][i] += f1[k][i];
    }
  }

  Field utmp(g, n);
  for (int k = 0; k < n; ++k) {
    if (!bnd0[k].empty()) utmp.set_column(k, 0, bnd0[k]);
    if (!bnd1[k].empty()) utmp.set_column(k, nx - 1, bnd1[k]);
  }
  Field out = ops_->apply_calC(utmp);
  out += f;
  return out;
}

Field TraceSolver::solve_neumann(const Field& f, double tol, int max_iter) const {
  Field u = f;
  for (int it = 0; it < max_iter; ++it) {
    Field next = ops_->apply_calC(u);
    next += f;
    const double delta = sup_distance(next, u);
    u = std::move(next);
    if (delta <= tol * (1.0 + f.norm_sup())) break;
  }
  return u;
}

double TraceSolver::norm_estimate() const {
  if (norm_est_) return *norm_est_;
  if (resonant()) {
    norm_est_ = std::numeric_limits<double>::infinity();
    return *norm_est_;
  }
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const auto& g = ops_->grid();
  double d = 1.0;
  for (int probe = 0; probe < 8; ++probe) {
    Field f(g, ops_->problem().dim());
    for (double& v : f.raw()) v = dist(rng);
    const double fn = f.norm_sup();
    if (fn == 0.0) continue;
    d = std::max(d, solve(f).norm_sup() / fn);
  }
  norm_est_ = 1.25 * d;
  return *norm_est_;
}

TraceCondition trace_condition(const TransportProblem& p, double lambda, const Field& u0) {
  OperatorSet ops(p, lambda, u0);
  return TraceSolver(ops).condition();
}

Field solve_I_minus_calC(const TransportProblem& p, double lambda, const Field& u0,
                         const Field& f) {
  OperatorSet ops(p, lambda, u0);
  return TraceSolver(ops).solve(f);
}

}  // namespace perihyp
