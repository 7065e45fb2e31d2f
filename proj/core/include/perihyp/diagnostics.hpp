#pragma once

#include <optional>
#include <string>
#include <vector>

#include "perihyp/field.hpp"
#include "perihyp/problem.hpp"
#include "perihyp/wave.hpp"

namespace perihyp {

/// Thresholds separating discretization noise from true degeneracy.
struct DiagnosticThresholds {
  double rs_warning = 0.95;
  double sigma_floor_rel = 1e-8;
  double multiplier_floor = 1e-6;
};

/// Contraction indicators R, S of the boundary round trip, evaluated at the
/// reference state u0. The inner maxima over the two time arguments are taken
/// over the time grid nodes; the x-integral uses the composite panels.
std::pair<double, double> nonresonance_RS(const TransportProblem& p, const Field& u0,
                                          double lambda = 0.0);

/// Time profiles R0(t), S0(t) of the sharper m = 1, n = 2 indicator,
/// evaluated at the time nodes.
std::pair<std::vector<double>, std::vector<double>> nonresonance_R0S0(
    const TransportProblem& p, const Field& u0, double lambda = 0.0);

/// Wave-problem R0(t), S0(t) profiles at the reference scalar state u0.
std::pair<std::vector<double>, std::vector<double>> wave_R0S0(const WaveProblem& wp,
                                                              const Field& u0);

/// 2 int_0^1 d5b / a dx for the telegraph subclass (d5b independent of t and
/// of the state); nonzero means the wave nonresonance holds for any forcing.
double telegraph_check(const WaveProblem& wp);

struct BcContractionReport {
  bool passed = false;
  bool row_sums_ok = false;
  bool sign_condition_ok = false;
  std::vector<double> row_sums;          // per component
  std::vector<double> sign_margins;      // per component, positive = satisfied
  int worst_row = -1;
};

/// Sufficient smallness conditions for the boundary operator: row sums of the
/// coupling below one plus the damping sign condition on the diagonal of the
/// source.
BcContractionReport bc_contraction_check(const TransportProblem& p, const Field& u0,
                                         double lambda = 0.0);

struct CoercivityReport {
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  int kernel_dim = 0;  // singular values below sigma_floor_rel * sigma_max
};

/// Smallest singular value of the dense matrix of I - calC - calD on a small
/// grid (the computable stand-in for the lower bound of the linearization).
CoercivityReport coercivity(const TransportProblem& p, double lambda, const Field& u0,
                            const DiagnosticThresholds& thr = {});

struct ResonanceRow {
  double lambda = 0.0;
  double sigma_min = 0.0;
  double sigma_min_rel = 0.0;
  double cond = 0.0;
  double R = 0.0;
  double S = 0.0;
  std::optional<double> min_mode_multiplier;
  bool flag_sigma = false;
  bool flag_rs = false;
  bool flag_multiplier = false;
  bool flagged() const { return flag_sigma || flag_rs || flag_multiplier; }
};

struct ResonanceTable {
  std::vector<ResonanceRow> rows;  // sorted by lambda
  DiagnosticThresholds thresholds;
};

/// Sweep lambda over [lo, hi] and aggregate the trace-condition numbers with
/// the R/S indicators.
ResonanceTable resonance_scan(const TransportProblem& p, const Field& u0, double lo, double hi,
                              int steps, const DiagnosticThresholds& thr = {});

struct DerivativeCheckEntry {
  int j = 0, k = 0;
  double max_rel_error = 0.0;
};

struct DerivativeCheckReport {
  bool passed = false;
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  std::vector<DerivativeCheckEntry> entries;
};

/// Compare the user-supplied partial derivatives of the source against
/// central finite differences at deterministic sample points.
DerivativeCheckReport derivative_consistency(const FirstOrderProblem& p, int samples = 100,
                                             double tolerance = 1e-5);
DerivativeCheckReport derivative_consistency(const WaveProblem& p, int samples = 100,
                                             double tolerance = 1e-5);

}  // namespace perihyp
