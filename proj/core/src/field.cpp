#include "perihyp/field.hpp"

#include <cmath>
#include <stdexcept>

#include "perihyp/interp.hpp"
#include "perihyp/parallel.hpp"
#include "perihyp/trig.hpp"

namespace perihyp {

Field::Field(PeriodicGrid grid, int ncomp) : grid_(grid), ncomp_(ncomp) {
  if (ncomp < 1) throw std::invalid_argument("Field: ncomp must be positive");
  data_.assign(static_cast<size_t>(ncomp) * grid.nt * grid.nx, 0.0);
}

Field Field::from_function(PeriodicGrid grid, int ncomp,
                           const std::function<double(int, double, double)>& fn) {
  Field f(grid, ncomp);
  for (int c = 0; c < ncomp; ++c)
    for (int it = 0; it < grid.nt; ++it)
      for (int ix = 0; ix < grid.nx; ++ix) {
        const double v = fn(c, grid.t(it), grid.x(ix));
        if (!std::isfinite(v))
          throw std::invalid_argument("Field::from_function: non-finite value");
        f.at(c, it, ix) = v;
      }
  return f;
}

void Field::copy_column(int c, int ix, std::span<double> out) const {
  for (int it = 0; it < grid_.nt; ++it) out[it] = data_[index(c, it, ix)];
}

void Field::set_column(int c, int ix, std::span<const double> in) {
  for (int it = 0; it < grid_.nt; ++it) data_[index(c, it, ix)] = in[it];
}

Field Field::shifted(double s) const {
  if (!std::isfinite(s)) throw std::invalid_argument("Field::shifted: non-finite shift");
  if (s == 0.0) return *this;
  Field out(grid_, ncomp_);
  parallel_for(0, ncomp_ * grid_.nx, [&](int slot) {
    const int c = slot / grid_.nx;
    const int ix = slot % grid_.nx;
    std::vector<double> col(grid_.nt), res(grid_.nt);
    copy_column(c, ix, col);
    trig::shift(col, s, res);
    out.set_column(c, ix, res);
  });
  return out;
}

Field Field::time_derivative(int order) const {
  if (order == 0) return *this;
  if (order < 0 || order > grid_.nt / 2 - 1)
    throw std::invalid_argument("Field::time_derivative: order must be in [0, nt/2-1]");
  Field out(grid_, ncomp_);
  parallel_for(0, ncomp_ * grid_.nx, [&](int slot) {
    const int c = slot / grid_.nx;
    const int ix = slot % grid_.nx;
    std::vector<double> col(grid_.nt), res(grid_.nt);
    copy_column(c, ix, col);
    trig::derivative(col, order, res);
    out.set_column(c, ix, res);
  });
  return out;
}

double Field::norm_sup() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double Field::norm_l(int l) const {
  double acc = norm_sup();
  Field d = *this;
  for (int k = 1; k <= l; ++k) {
    d = d.time_derivative(1);
    acc += d.norm_sup();
  }
  return acc;
}

double Field::eval(int c, double t, double x) const {
  if (x < -1e-12 || x > 1.0 + 1e-12)
    throw std::domain_error("Field::eval: x outside [0, 1]");
  x = std::clamp(x, 0.0, 1.0);
  const int nx = grid_.nx;
  std::vector<double> rowvals(nx), col(grid_.nt);
  for (int ix = 0; ix < nx; ++ix) {
    copy_column(c, ix, col);
    rowvals[ix] = trig::eval(col, t);
  }
  std::vector<double> M(nx);
  interp::spline_moments(rowvals, grid_.hx(), M);
  return interp::spline_eval(rowvals, M, grid_.hx(), x);
}

Field& Field::operator+=(const Field& o) {
  for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Field& Field::operator-=(const Field& o) {
  for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Field& Field::operator*=(double a) {
  for (double& v : data_) v *= a;
  return *this;
}

double sup_distance(const Field& a, const Field& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.raw().size(); ++i)
    m = std::max(m, std::abs(a.raw()[i] - b.raw()[i]));
  return m;
}

}  // namespace perihyp
