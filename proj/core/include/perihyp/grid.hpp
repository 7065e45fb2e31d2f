#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace perihyp {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform tensor grid over one time period [0, 2*pi) x space [0, 1].
/// Time nodes exclude the right endpoint (periodic direction); space nodes
/// include both boundaries.
struct PeriodicGrid {
  int nt = 0;
  int nx = 0;

  PeriodicGrid() = default;
  PeriodicGrid(int nt_, int nx_) : nt(nt_), nx(nx_) {
    if (nt < 4 || nt % 2 != 0)
      throw std::invalid_argument("PeriodicGrid: nt must be even and >= 4, got " +
                                  std::to_string(nt));
    if (nx < 2)
      throw std::invalid_argument("PeriodicGrid: nx must be >= 2, got " + std::to_string(nx));
  }

  double t(int i) const { return kTwoPi * i / nt; }
  double x(int q) const { return static_cast<double>(q) / (nx - 1); }
  double dt() const { return kTwoPi / nt; }
  double hx() const { return 1.0 / (nx - 1); }
  int nodes() const { return nt * nx; }

  bool operator==(const PeriodicGrid&) const = default;
};

}  // namespace perihyp
