#pragma once

#include <functional>
#include <span>
#include <vector>

#include "perihyp/grid.hpp"

namespace perihyp {

/// n-component grid function on a PeriodicGrid, 2*pi-periodic in time.
/// Storage covers one period; layout is component-major with contiguous
/// space rows: data[(c*nt + it)*nx + ix].
///
/// Fields are immutable values in the solver pipeline; all member operations
/// return new fields.
class Field {
 public:
  Field() = default;
  Field(PeriodicGrid grid, int ncomp);

  static Field from_function(PeriodicGrid grid, int ncomp,
                             const std::function<double(int c, double t, double x)>& fn);

  const PeriodicGrid& grid() const { return grid_; }
  int ncomp() const { return ncomp_; }
  bool empty() const { return data_.empty(); }
  int size() const { return static_cast<int>(data_.size()); }

  double at(int c, int it, int ix) const { return data_[index(c, it, ix)]; }
  double& at(int c, int it, int ix) { return data_[index(c, it, ix)]; }
  std::span<const double> row(int c, int it) const {
    return {data_.data() + index(c, it, 0), static_cast<size_t>(grid_.nx)};
  }
  std::span<double> row(int c, int it) {
    return {data_.data() + index(c, it, 0), static_cast<size_t>(grid_.nx)};
  }
  std::span<const double> raw() const { return data_; }
  std::span<double> raw() { return data_; }

  void copy_column(int c, int ix, std::span<double> out) const;
  void set_column(int c, int ix, std::span<const double> in);

  /// t -> u(t + s, x) via trigonometric interpolation in time.
  Field shifted(double s) const;

  /// Spectral time derivative applied `order` times. Requires order <= nt/2 - 1.
  Field time_derivative(int order) const;

  /// sup over components and nodes.
  double norm_sup() const;

  /// sum_{k<=l} of the sup norm of the k-th time derivative.
  double norm_l(int l) const;

  /// Trigonometric interpolation in t composed with cubic interpolation in x.
  /// Exact at grid nodes. Requires x in [0, 1].
  double eval(int c, double t, double x) const;

  Field& operator+=(const Field& o);
  Field& operator-=(const Field& o);
  Field& operator*=(double a);
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double a, Field f) { return f *= a; }

 private:
  size_t index(int c, int it, int ix) const {
    return (static_cast<size_t>(c) * grid_.nt + it) * grid_.nx + ix;
  }
  PeriodicGrid grid_;
  int ncomp_ = 0;
  std::vector<double> data_;
};

/// Max-abs difference between two fields on the same grid.
double sup_distance(const Field& a, const Field& b);

}  // namespace perihyp
