#pragma once

#include <vector>

#include "json.hpp"

#include "ds2aw/curve.hpp"
#include "ds2aw/field.hpp"
#include "ds2aw/modes.hpp"

namespace ds2aw {

// Consistency checks of a built curve, all expected to be at roundoff level.
struct SpectralDiagnostics {
  double resonance_residual = 0.0;
  double wt_sigma_defect = 0.0;  // max | |W_t| - |sigma| | / |sigma|
  double alpha_beta_symmetry = 0.0;
  double reality = 0.0;
  double b_symmetry = 0.0;
  double offdiag_imag_defect = 0.0;  // distance of Im b_jk to {0, pi}
  std::vector<double> b_diag_minus_2log_eps;
};

SpectralDiagnostics diagnose(const SpectralData& sd);

nlohmann::json spectral_to_json(const SpectralData& sd);
nlohmann::json modes_to_json(const std::vector<Mode>& modes,
                             const GenericityReport& report);

struct SnapshotMetrics {
  double t = 0.0;
  double rel_l2 = 0.0;
  double rel_linf = 0.0;
  double max_abs_first = 0.0;
  double max_abs_second = 0.0;
};

// Errors of `first` against `second`, relative to the second run.
std::vector<SnapshotMetrics> compare_runs(const std::vector<Field>& first,
                                          const std::vector<Field>& second);
nlohmann::json metrics_to_json(const std::vector<SnapshotMetrics>& metrics);

}  // namespace ds2aw
