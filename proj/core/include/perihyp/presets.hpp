#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "perihyp/problem.hpp"

namespace perihyp {

/// Named, parameter-free problem constructors used throughout the test and
/// acceptance suites. Exactly one of first_order / wave is set. Presets with
/// a closed-form solution also carry reference evaluators.
struct Preset {
  std::string name;
  std::string summary;
  std::shared_ptr<const FirstOrderProblem> first_order;
  std::shared_ptr<const WaveProblem> wave;
  std::function<double(int c, double t, double x, double lambda)> reference;
  std::function<double(int c, double t, double x, double lambda)> reference_dlambda;
};

const std::vector<Preset>& builtin_problems();

/// Throws ConfigError for unknown names.
const Preset& find_preset(const std::string& name);

}  // namespace perihyp
