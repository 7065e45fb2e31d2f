#pragma once

#include <span>
#include <vector>

namespace perihyp::interp {

enum class SplineBC { not_a_knot, natural };

/// Second-derivative moments of the cubic spline through y on the uniform
/// grid x_i = i*h, i = 0..n-1. n >= 2; degenerate sizes fall back to the
/// exact low-degree interpolant.
void spline_moments(std::span<const double> y, double h, std::span<double> M,
                    SplineBC bc = SplineBC::not_a_knot);

/// Spline value at x (clamped to [0, (n-1)*h]).
double spline_eval(std::span<const double> y, std::span<const double> M, double h, double x);

/// Spline first derivative at x.
double spline_deriv(std::span<const double> y, std::span<const double> M, double h, double x);

/// S'(x_i) at every node.
void spline_nodal_derivative(std::span<const double> y, std::span<const double> M, double h,
                             std::span<double> dy);

/// One-shot convenience: interpolate y at the points xs.
void sample_row(std::span<const double> y, double h, std::span<const double> xs,
                std::span<double> out, SplineBC bc = SplineBC::not_a_knot);

/// Cumulative integral W(x_i) = int_0^{x_i} Q, where Q is the C^1 piecewise
/// quadratic interpolant of g (Q'' continuous across the first interior knot).
/// Q is exactly the derivative of the not-a-knot cubic spline whenever g is a
/// nodal sample of one, which makes this the exact inverse of
/// spline_nodal_derivative up to rounding.
void quadratic_antiderivative(std::span<const double> g, double h, std::span<double> W);

}  // namespace perihyp::interp
