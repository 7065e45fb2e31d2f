#include "perihyp/trig.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "perihyp/grid.hpp"

namespace perihyp::trig {

namespace {
constexpr double kPi = std::numbers::pi;
}

Plan::Plan(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("Plan: size must be positive");
  pow2_ = (n & (n - 1)) == 0;
  w_.resize(n_);
  for (int k = 0; k < n_; ++k) {
    const double ang = -2.0 * kPi * k / n_;
    w_[k] = {std::cos(ang), std::sin(ang)};
  }
  if (pow2_) {
    rev_.resize(n_);
    int lg = 0;
    while ((1 << lg) < n_) ++lg;
    for (int i = 0; i < n_; ++i) {
      int r = 0;
      for (int b = 0; b < lg; ++b)
        if (i & (1 << b)) r |= 1 << (lg - 1 - b);
      rev_[i] = r;
    }
  } else {
    scratch_.resize(n_);
  }
}

void Plan::radix2(std::complex<double>* a, bool inv) const {
  for (int i = 0; i < n_; ++i)
    if (i < rev_[i]) std::swap(a[i], a[rev_[i]]);
  for (int len = 2; len <= n_; len <<= 1) {
    const int step = n_ / len;
    for (int i = 0; i < n_; i += len) {
      for (int j = 0; j < len / 2; ++j) {
        std::complex<double> w = w_[static_cast<size_t>(j) * step];
        if (inv) w = std::conj(w);
        const std::complex<double> u = a[i + j];
        const std::complex<double> v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
      }
    }
  }
}

void Plan::direct(std::complex<double>* a, bool inv) const {
  for (int k = 0; k < n_; ++k) {
    std::complex<double> acc{0.0, 0.0};
    for (int j = 0; j < n_; ++j) {
      std::complex<double> w = w_[static_cast<size_t>(j) * k % n_];
      if (inv) w = std::conj(w);
      acc += a[j] * w;
    }
    scratch_[k] = acc;
  }
  for (int k = 0; k < n_; ++k) a[k] = scratch_[k];
}

void Plan::forward(std::complex<double>* a) const {
  pow2_ ? radix2(a, false) : direct(a, false);
}

void Plan::inverse(std::complex<double>* a) const {
  pow2_ ? radix2(a, true) : direct(a, true);
  const double inv_n = 1.0 / n_;
  for (int i = 0; i < n_; ++i) a[i] *= inv_n;
}

const Plan& plan(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Plan>> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = registry[n];
  if (!slot) slot = std::make_unique<Plan>(n);
  return *slot;
}

void shift(std::span<const double> in, double s, std::span<double> out) {
  const int n = static_cast<int>(in.size());
  if (!std::isfinite(s)) throw std::invalid_argument("trig::shift: non-finite shift");
  if (s == 0.0) {
    if (out.data() != in.data()) std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  const Plan& p = plan(n);
  std::vector<std::complex<double>> a(n);
  for (int i = 0; i < n; ++i) a[i] = in[i];
  p.forward(a.data());
  const int half = n / 2;
  for (int k = 1; k < half; ++k) {
    const std::complex<double> rot{std::cos(k * s), std::sin(k * s)};
    a[k] *= rot;
    a[n - k] *= std::conj(rot);
  }
  // Nyquist term is a pure cosine; its shifted value at the nodes scales by cos(half*s).
  a[half] *= std::cos(half * s);
  p.inverse(a.data());
  for (int i = 0; i < n; ++i) out[i] = a[i].real();
}

void derivative(std::span<const double> in, int order, std::span<double> out) {
  const int n = static_cast<int>(in.size());
  if (order < 0) throw std::invalid_argument("trig::derivative: negative order");
  if (order == 0) {
    if (out.data() != in.data()) std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  const Plan& p = plan(n);
  std::vector<std::complex<double>> a(n);
  for (int i = 0; i < n; ++i) a[i] = in[i];
  p.forward(a.data());
  const int half = n / 2;
  a[0] *= (order > 0) ? 0.0 : 1.0;
  for (int k = 1; k < half; ++k) {
    std::complex<double> ik{0.0, static_cast<double>(k)};
    std::complex<double> f{1.0, 0.0};
    for (int q = 0; q < order; ++q) f *= ik;
    a[k] *= f;
    a[n - k] *= std::conj(f);
  }
  // d/dt of the Nyquist cosine vanishes at the nodes for odd orders.
  if (order % 2 == 1) {
    a[half] = 0.0;
  } else {
    double f = 1.0;
    for (int q = 0; q < order / 2; ++q) f *= -static_cast<double>(half) * half;
    a[half] *= f;
  }
  p.inverse(a.data());
  for (int i = 0; i < n; ++i) out[i] = a[i].real();
}

namespace {

// Periodic cardinal kernel for even n: K(theta) = sin(n*theta/2) / (n*tan(theta/2)).
double cardinal_kernel(int n, double theta) {
  theta = std::remainder(theta, kTwoPi);
  const double t2 = 0.5 * theta;
  if (std::abs(t2) < 1e-14) return 1.0;
  return std::sin(n * t2) / (n * std::tan(t2));
}

}  // namespace

double eval(std::span<const double> col, double t) {
  const int n = static_cast<int>(col.size());
  const double dt = kTwoPi / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += col[i] * cardinal_kernel(n, t - i * dt);
  return acc;
}

void cardinal_weights(int n, double t, std::span<double> w) {
  const double dt = kTwoPi / n;
  for (int i = 0; i < n; ++i) w[i] = cardinal_kernel(n, t - i * dt);
}

}  // namespace perihyp::trig
