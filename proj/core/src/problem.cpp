#include "perihyp/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace perihyp {

BoundaryCoupling BoundaryCoupling::none(int n, int m) {
  return reflection(n, m, [](int, int, double, double) { return 0.0; });
}

BoundaryCoupling BoundaryCoupling::reflection(int n, int m, Entry r) {
  BoundaryCoupling c;
  c.kind_ = Kind::reflection;
  c.n_ = n;
  c.m_ = m;
  c.r_ = std::move(r);
  return c;
}

BoundaryCoupling BoundaryCoupling::general(int n, int m, Entry r00, Entry r01, Entry r10,
                                           Entry r11) {
  BoundaryCoupling c;
  c.kind_ = Kind::general;
  c.n_ = n;
  c.m_ = m;
  c.r00_ = std::move(r00);
  c.r01_ = std::move(r01);
  c.r10_ = std::move(r10);
  c.r11_ = std::move(r11);
  return c;
}

double BoundaryCoupling::r(int j, int k, double t, double lambda) const {
  if (kind_ != Kind::reflection)
    throw std::logic_error("BoundaryCoupling::r: not a reflection coupling");
  const bool legal = (j < m_ && k >= m_) || (j >= m_ && k < m_);
  if (!legal) return 0.0;
  return r_(j, k, t, lambda);
}

double BoundaryCoupling::rblock(int alpha, int beta, int j, int k, double t,
                                double lambda) const {
  if (kind_ != Kind::general)
    throw std::logic_error("BoundaryCoupling::rblock: not a general coupling");
  const Entry& e = (alpha == 0) ? (beta == 0 ? r00_ : r01_) : (beta == 0 ? r10_ : r11_);
  return e(j, k, t, lambda);
}

TransportProblem::TransportProblem(int n, int m, BoundaryCoupling coupling)
    : n_(n), m_(m), coupling_(std::move(coupling)) {
  if (n < 1) throw std::invalid_argument("TransportProblem: n must be positive");
  if (m < 0 || m > n) throw std::invalid_argument("TransportProblem: need 0 <= m <= n");
}

Field TransportProblem::make_aux(double, const Field&) const { return Field(); }

double TransportProblem::source_derivative(int j, double t, double x, double lambda,
                                           const StatePoint& at, const StatePoint& dir) const {
  std::vector<double> cu(n_), caux(aux_count());
  linearized_source(j, t, x, lambda, at, cu, caux);
  double acc = 0.0;
  for (int k = 0; k < n_; ++k) acc += cu[k] * dir.u[k];
  for (size_t a = 0; a < caux.size(); ++a) acc += caux[a] * dir.aux[a];
  return acc;
}

FirstOrderProblem::FirstOrderProblem(int n, int m, Speed a, Source b, SourceJac db,
                                     BoundaryCoupling coupling)
    : TransportProblem(n, m, std::move(coupling)),
      a_(std::move(a)),
      b_(std::move(b)),
      db_(std::move(db)) {}

namespace {

void check_finite(ValidationReport& rep, const char* hyp, double v, double x, double lambda,
                  const std::string& what) {
  if (!std::isfinite(v)) {
    rep.passed = false;
    rep.violations.push_back({hyp, "non-finite value of " + what, x, lambda});
  }
}

}  // namespace

ValidationReport validate(const TransportProblem& p, double lambda_lo, double lambda_hi,
                          int samples) {
  if (samples < 8) throw std::invalid_argument("validate: need samples >= 8");
  ValidationReport rep;
  const int n = p.dim();
  constexpr double kSpeedFloor = 1e-12;
  for (int is = 0; is <= samples; ++is) {
    const double x = static_cast<double>(is) / samples;
    for (int il = 0; il <= samples; ++il) {
      const double lambda =
          lambda_lo + (lambda_hi - lambda_lo) * static_cast<double>(il) / samples;
      std::vector<double> a(n);
      for (int j = 0; j < n; ++j) {
        a[j] = p.speed(j, x, lambda);
        check_finite(rep, "(speeds)", a[j], x, lambda, "a_" + std::to_string(j + 1));
        if (std::abs(a[j]) <= kSpeedFloor) {
          rep.passed = false;
          rep.violations.push_back({"(nonvanishing speed)",
                                    "a_" + std::to_string(j + 1) + " vanishes", x, lambda});
        }
      }
      for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
          if (std::abs(a[j] - a[k]) <= kSpeedFloor) {
            rep.passed = false;
            rep.violations.push_back({"(distinct speeds)",
                                      "a_" + std::to_string(j + 1) + " = a_" +
                                          std::to_string(k + 1),
                                      x, lambda});
          }
    }
  }
  // Spot-check 2*pi periodicity of the coupling and of the source in t.
  std::vector<double> uprobe(n, 0.25);
  std::vector<double> auxprobe(p.aux_count(), 0.0);
  const double lam_mid = 0.5 * (lambda_lo + lambda_hi);
  for (int it = 0; it < 8; ++it) {
    const double t = kTwoPi * it / 8 + 0.1234;
    for (int j = 0; j < n; ++j) {
      StatePoint sp{uprobe, auxprobe};
      const double b0 = p.source(j, t, 0.5, lam_mid, sp);
      const double b1 = p.source(j, t + kTwoPi, 0.5, lam_mid, sp);
      check_finite(rep, "(source)", b0, 0.5, lam_mid, "b_" + std::to_string(j + 1));
      if (std::isfinite(b0) && std::isfinite(b1) &&
          std::abs(b0 - b1) > 1e-9 * (1.0 + std::abs(b0))) {
        rep.passed = false;
        rep.violations.push_back({"(time periodicity)",
                                  "b_" + std::to_string(j + 1) + " not 2*pi-periodic at t=" +
                                      std::to_string(t),
                                  0.5, lam_mid});
      }
      for (int k = 0; k < n; ++k) {
        double r0 = 0.0, r1 = 0.0;
        if (p.coupling().kind() == BoundaryCoupling::Kind::reflection) {
          r0 = p.coupling().r(j, k, t, lam_mid);
          r1 = p.coupling().r(j, k, t + kTwoPi, lam_mid);
        } else {
          r0 = p.coupling().rblock(0, 0, j, k, t, lam_mid) +
               p.coupling().rblock(1, 1, j, k, t, lam_mid);
          r1 = p.coupling().rblock(0, 0, j, k, t + kTwoPi, lam_mid) +
               p.coupling().rblock(1, 1, j, k, t + kTwoPi, lam_mid);
        }
        if (std::isfinite(r0) && std::abs(r0 - r1) > 1e-9 * (1.0 + std::abs(r0))) {
          rep.passed = false;
          rep.violations.push_back(
              {"(time periodicity)", "coupling entry not 2*pi-periodic", 0.0, lam_mid});
        }
      }
    }
  }
  return rep;
}

ValidationReport validate(const WaveProblem& p, double lambda_lo, double lambda_hi,
                          int samples) {
  if (samples < 8) throw std::invalid_argument("validate: need samples >= 8");
  ValidationReport rep;
  for (int is = 0; is <= samples; ++is) {
    const double x = static_cast<double>(is) / samples;
    for (int il = 0; il <= samples; ++il) {
      const double lambda =
          lambda_lo + (lambda_hi - lambda_lo) * static_cast<double>(il) / samples;
      const double a = p.a(x, lambda);
      check_finite(rep, "(wave speed)", a, x, lambda, "a");
      if (!(a > 0.0)) {
        rep.passed = false;
        rep.violations.push_back({"(positive wave speed)", "a <= 0", x, lambda});
      }
    }
  }
  const double lam_mid = 0.5 * (lambda_lo + lambda_hi);
  for (int it = 0; it < 8; ++it) {
    const double t = kTwoPi * it / 8 + 0.1234;
    const double b0 = p.b(t, 0.5, lam_mid, 0.25, 0.1, -0.1);
    const double b1 = p.b(t + kTwoPi, 0.5, lam_mid, 0.25, 0.1, -0.1);
    check_finite(rep, "(source)", b0, 0.5, lam_mid, "b");
    if (std::isfinite(b0) && std::abs(b0 - b1) > 1e-9 * (1.0 + std::abs(b0))) {
      rep.passed = false;
      rep.violations.push_back({"(time periodicity)", "b not 2*pi-periodic", 0.5, lam_mid});
    }
  }
  return rep;
}

}  // namespace perihyp
