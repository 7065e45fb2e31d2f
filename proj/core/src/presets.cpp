#include "perihyp/presets.hpp"

#include <cmath>
#include <numbers>

#include "perihyp/errors.hpp"

namespace perihyp {

namespace {

constexpr double kPi = std::numbers::pi;

Preset make_mn1() {
  Preset p;
  p.name = "remark-mn1";
  p.summary =
      "scalar transport d_t u + (1+lambda^2) d_x u + cos t = 0, u(t,0) = 0; "
      "closed-form solution";
  p.first_order = std::make_shared<FirstOrderProblem>(
      1, 1, [](int, double, double lambda) { return 1.0 + lambda * lambda; },
      [](int, double t, double, double, std::span<const double>) { return std::cos(t); },
      [](int, int, double, double, double, std::span<const double>) { return 0.0; },
      BoundaryCoupling::none(1, 1));
  p.reference = [](int, double t, double x, double lambda) {
    const double c = 1.0 + lambda * lambda;
    return std::sin(t - x / c) - std::sin(t);
  };
  p.reference_dlambda = [](int, double t, double x, double lambda) {
    const double c = 1.0 + lambda * lambda;
    return 2.0 * lambda * x / (c * c) * std::cos(t - x / c);
  };
  return p;
}

Preset make_rema() {
  Preset p;
  p.name = "remark-rema";
  p.summary =
      "transport pair with unit reflection r12 = r21 = 1 and zero source; the "
      "boundary round trip shifts time by 2(1+lambda^2), so the trace system "
      "degenerates when (1+lambda^2)/pi is rational";
  p.first_order = std::make_shared<FirstOrderProblem>(
      2, 1,
      [](int j, double, double lambda) {
        const double s = 1.0 / (1.0 + lambda * lambda);
        return (j == 0) ? s : -s;
      },
      [](int, double, double, double, std::span<const double>) { return 0.0; },
      [](int, int, double, double, double, std::span<const double>) { return 0.0; },
      BoundaryCoupling::reflection(2, 1, [](int j, int k, double, double) {
        return (j != k) ? 1.0 : 0.0;
      }));
  return p;
}

Preset make_telegraph() {
  Preset p;
  p.name = "telegraph";
  p.summary =
      "damped wave equation d_t^2 u - d_x^2 u + d_t u + 0.1 u^3 + forcing = 0 "
      "with mixed boundary conditions";
  WaveProblem w;
  w.a = [](double, double) { return 1.0; };
  w.dxa = [](double, double) { return 0.0; };
  w.b = [](double t, double x, double, double u, double pp, double) {
    return pp + 0.1 * u * u * u + 0.2 * std::cos(t) * std::sin(0.5 * kPi * x);
  };
  w.d4b = [](double, double, double, double u, double, double) { return 0.3 * u * u; };
  w.d5b = [](double, double, double, double, double, double) { return 1.0; };
  w.d6b = [](double, double, double, double, double, double) { return 0.0; };
  p.wave = std::make_shared<WaveProblem>(std::move(w));
  return p;
}

// Manufactured 2x2 semilinear system with cubic nonlinearity and smooth
// time-dependent reflection, built around the exact solution
//   u1 = (1-x) p(t) + x g1(t),  u2 = (1-x) g2(t) + x q(t),
// with p = r12 g2 and q = r21 g1 so the boundary conditions hold exactly.
struct Mms2x2 {
  static constexpr double kappa = 0.4;
  static constexpr double gamma = 0.3;
  static double r12(double t) { return 0.5 + 0.1 * std::sin(t); }
  static double r21(double) { return 0.5; }
  static double g1(double t) { return 0.3 * std::sin(t); }
  static double g2(double t) { return 0.3 * std::cos(t); }
  static double pfun(double t) { return r12(t) * g2(t); }
  static double qfun(double t) { return r21(t) * g1(t); }
  static double dp(double t) {
    return 0.1 * std::cos(t) * 0.3 * std::cos(t) + r12(t) * (-0.3 * std::sin(t));
  }
  static double dq(double t) { return 0.15 * std::cos(t); }
  static double dg1(double t) { return 0.3 * std::cos(t); }
  static double dg2(double t) { return -0.3 * std::sin(t); }
  static double exact(int c, double t, double x) {
    return (c == 0) ? (1.0 - x) * pfun(t) + x * g1(t) : (1.0 - x) * g2(t) + x * qfun(t);
  }
  static double exact_t(int c, double t, double x) {
    return (c == 0) ? (1.0 - x) * dp(t) + x * dg1(t) : (1.0 - x) * dg2(t) + x * dq(t);
  }
  static double exact_x(int c, double t, double) {
    return (c == 0) ? g1(t) - pfun(t) : qfun(t) - g2(t);
  }
  static double speed(int j) { return (j == 0) ? 1.0 : -1.0; }
  static double nonlinear(int j, std::span<const double> u) {
    return kappa * u[j] * u[j] * u[j] + gamma * u[1 - j];
  }
  static double forcing(int j, double t, double x) {
    const double ustar[2] = {exact(0, t, x), exact(1, t, x)};
    return -(exact_t(j, t, x) + speed(j) * exact_x(j, t, x)) - nonlinear(j, ustar);
  }
};

Preset make_mms2x2() {
  Preset p;
  p.name = "mms-2x2";
  p.summary =
      "manufactured 2x2 semilinear system (cubic nonlinearity, smooth "
      "reflection, R = 0.3) with a known exact solution";
  p.first_order = std::make_shared<FirstOrderProblem>(
      2, 1, [](int j, double, double) { return Mms2x2::speed(j); },
      [](int j, double t, double x, double, std::span<const double> u) {
        return Mms2x2::nonlinear(j, u) + Mms2x2::forcing(j, t, x);
      },
      [](int j, int k, double, double, double, std::span<const double> u) {
        if (j == k) return 3.0 * Mms2x2::kappa * u[j] * u[j];
        return Mms2x2::gamma;
      },
      BoundaryCoupling::reflection(2, 1, [](int j, int k, double t, double) {
        if (j == 0 && k == 1) return Mms2x2::r12(t);
        if (j == 1 && k == 0) return Mms2x2::r21(t);
        return 0.0;
      }));
  p.reference = [](int c, double t, double x, double) { return Mms2x2::exact(c, t, x); };
  return p;
}

Preset make_linear2x2() {
  Preset p;
  p.name = "linear-2x2";
  p.summary =
      "nonresonant linear transport pair with |r12 r21| = 0.35 and weak "
      "off-diagonal source coupling";
  p.first_order = std::make_shared<FirstOrderProblem>(
      2, 1,
      [](int j, double, double lambda) {
        const double s = 1.0 + lambda * lambda;
        return (j == 0) ? s : -s;
      },
      [](int j, double, double, double, std::span<const double> u) {
        return (j == 0) ? 0.1 * u[1] : 0.05 * u[0];
      },
      [](int j, int k, double, double, double, std::span<const double>) {
        if (j == 0 && k == 1) return 0.1;
        if (j == 1 && k == 0) return 0.05;
        return 0.0;
      },
      BoundaryCoupling::reflection(2, 1, [](int j, int k, double, double) {
        if (j == 0 && k == 1) return 0.5;
        if (j == 1 && k == 0) return 0.7;
        return 0.0;
      }));
  return p;
}

Preset make_wave_mms() {
  Preset p;
  p.name = "wave-mms";
  p.summary =
      "manufactured wave problem with damping and cubic nonlinearity around "
      "u = 0.3 sin t sin(pi x / 2)";
  constexpr double A = 0.3;
  WaveProblem w;
  w.a = [](double, double) { return 1.0; };
  w.dxa = [](double, double) { return 0.0; };
  auto ustar = [](double t, double x) { return A * std::sin(t) * std::sin(0.5 * kPi * x); };
  auto pstar = [](double t, double x) { return A * std::cos(t) * std::sin(0.5 * kPi * x); };
  w.b = [ustar, pstar](double t, double x, double, double u, double pp, double) {
    const double us = ustar(t, x);
    const double forcing = -((0.25 * kPi * kPi - 1.0) * us + 0.5 * pstar(t, x) +
                             0.2 * us * us * us);
    return 0.5 * pp + 0.2 * u * u * u + forcing;
  };
  w.d4b = [](double, double, double, double u, double, double) { return 0.6 * u * u; };
  w.d5b = [](double, double, double, double, double, double) { return 0.5; };
  w.d6b = [](double, double, double, double, double, double) { return 0.0; };
  p.wave = std::make_shared<WaveProblem>(std::move(w));
  p.reference = [ustar](int, double t, double x, double) { return ustar(t, x); };
  return p;
}

}  // namespace

const std::vector<Preset>& builtin_problems() {
  static const std::vector<Preset> presets = [] {
    std::vector<Preset> v;
    v.push_back(make_mn1());
    v.push_back(make_rema());
    v.push_back(make_telegraph());
    v.push_back(make_mms2x2());
    v.push_back(make_linear2x2());
    v.push_back(make_wave_mms());
    return v;
  }();
  return presets;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : builtin_problems())
    if (p.name == name) return p;
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace perihyp
