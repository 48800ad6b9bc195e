#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace homflow {

/// Tolerances that the underlying mathematics does not fix (convergence rates,
/// grid-dependent residual levels). Frozen after one calibration run.
struct Calibration {
  double rescale_deviation_at_1e6 = 0.01;
  double rescale_noise_floor = 1e-10;
  double harmonic_order_min = 3.5;
  double bundle_residual_max = 1e-4;
  double bundle_runtime_max_seconds = 60.0;
  double soliton_v_tilde_drift_per_decade = 1e-8;
  double f4_einstein_residual_max = 1e-8;
  int bundle_grid = 256;
  double bundle_amplitude = 0.1;
  int bundle_modes = 3;
  unsigned long long bundle_rng_seed = 7;

  /// Reads a JSON object with any subset of the fields; unknown keys are a ConfigError.
  static Calibration load(const std::string& path);
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the selected criteria (all when empty) in order.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& which, const Calibration& cal);

/// One line per criterion: "[PASS] 3 closed-forms (0.41 s): ...".
void print_results(std::ostream& os, const std::vector<CriterionResult>& results);

}  // namespace homflow
