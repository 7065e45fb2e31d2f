#pragma once

#include <complex>
#include <span>
#include <vector>

namespace perihyp::trig {

/// Cached FFT plan for one transform size. Power-of-two sizes use radix-2;
/// other even sizes fall back to a direct DFT with a precomputed twiddle table.
class Plan {
 public:
  explicit Plan(int n);
  int size() const { return n_; }
  void forward(std::complex<double>* a) const;  // unscaled
  void inverse(std::complex<double>* a) const;  // scaled by 1/n
 private:
  void radix2(std::complex<double>* a, bool inv) const;
  void direct(std::complex<double>* a, bool inv) const;
  int n_;
  bool pow2_;
  std::vector<int> rev_;
  std::vector<std::complex<double>> w_;     // exp(-2*pi*i*k/n), k = 0..n-1
  mutable std::vector<std::complex<double>> scratch_;
};

/// Shared plan registry (thread-safe, populate-before-use).
const Plan& plan(int n);

/// Interpolating the nodal values by the real trigonometric polynomial of
/// degree n/2 (cosine-only Nyquist term), evaluate at t + s for every node t.
/// `in` and `out` may alias.
void shift(std::span<const double> in, double s, std::span<double> out);

/// Spectral differentiation of the nodal interpolant, applied `order` times.
void derivative(std::span<const double> in, int order, std::span<double> out);

/// Value of the nodal interpolant at an arbitrary point (cardinal-kernel sum).
double eval(std::span<const double> col, double t);

/// Row of interpolation weights: value(t) = sum_i w[i] * col[i].
void cardinal_weights(int n, double t, std::span<double> w);

}  // namespace perihyp::trig
