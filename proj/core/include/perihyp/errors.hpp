#pragma once

#include <stdexcept>
#include <string>

namespace perihyp {

/// A characteristic speed dropped below the admissible floor during quadrature.
class SingularSpeedError : public std::runtime_error {
 public:
  SingularSpeedError(int component, double x, double lambda)
      : std::runtime_error("singular speed: |a_" + std::to_string(component + 1) +
                           "(" + std::to_string(x) + ", lambda=" + std::to_string(lambda) +
                           ")| below floor"),
        component(component), x(x), lambda(lambda) {}
  int component;
  double x;
  double lambda;
};

/// The boundary-trace system is numerically singular at this parameter value.
class ResonanceError : public std::runtime_error {
 public:
  ResonanceError(double lambda, double sigma_min_rel)
      : std::runtime_error("resonant trace system at lambda=" + std::to_string(lambda) +
                           " (relative sigma_min=" + std::to_string(sigma_min_rel) + ")"),
        lambda(lambda), sigma_min_rel(sigma_min_rel) {}
  double lambda;
  double sigma_min_rel;
};

/// The stationary inner iteration failed to reach its tolerance and no dense
/// fallback was available at this grid size.
class LinearStallError : public std::runtime_error {
 public:
  explicit LinearStallError(double residual)
      : std::runtime_error("linearized solve stalled, residual=" + std::to_string(residual)),
        residual(residual) {}
  double residual;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace perihyp
