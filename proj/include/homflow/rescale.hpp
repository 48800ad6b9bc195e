#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homflow/catalog.hpp"
#include "homflow/flow.hpp"

namespace homflow {

/// Dense view of c_hat_i(t) = kappa_i s^{p_i - 1} c_i(s t) over another solution.
class RescaledSolution final : public DenseSolution {
 public:
  RescaledSolution(std::shared_ptr<const DenseSolution> base, double s, NormalizerSpec norm);

  double t_min() const override { return root_->t_min() / s_; }
  double t_max() const override { return root_->t_max() / s_; }
  std::size_t size() const override { return root_->size(); }
  std::vector<double> operator()(double t) const override;

  /// Unnormalized coefficients c(s t) of the underlying flow.
  std::vector<double> raw(double t) const { return (*root_)(s_ * t); }
  double scale() const { return s_; }

 private:
  std::shared_ptr<const DenseSolution> root_;  // never itself a RescaledSolution
  double s_;
  NormalizerSpec norm_;
};

/// Normalizer that reproduces `first` at scale s1 followed by `second` at any
/// scale s2 as one rescaling at scale s1 s2.
NormalizerSpec compose(const NormalizerSpec& first, double s1, const NormalizerSpec& second);

NormalizerSpec identity_normalizer(std::size_t n);

/// Rescaled flow on the window [t_lo, t_hi] with `per_decade` log samples.
/// Throws RangeError when the trajectory does not cover [s t_lo, s t_hi].
Trajectory rescaled_trajectory(const Trajectory& traj, double s, const NormalizerSpec& norm, double t_lo,
                               double t_hi, int per_decade = 20);

enum class FitModel { PurePower, LogCorrected };

struct FitResult {
  double exponent = 0.0;
  double coefficient = 0.0;
  double log_power = 0.0;  // q in c t^p (ln t)^q
  double residual = 0.0;   // max relative deviation on the window
  FitModel model = FitModel::PurePower;
  std::size_t points = 0;
};

struct FitOptions {
  /// Fraction of the log-time span (from the end) used for the fit.
  double tail_fraction = 0.25;
  /// Fix q instead of selecting it from {-1/2, 0, 1/2} by residual.
  std::optional<double> log_power;
  std::size_t min_points = 16;
};

/// Least squares in log-log coordinates. Throws DomainError on nonpositive values
/// and ValidationError when fewer than min_points fall in the window.
FitResult fit_power_law(const std::vector<std::pair<double, double>>& samples, const FitOptions& opt = {});

/// Tail fraction covering the last `decades` decades of [t_min, t_max].
double tail_fraction_for_decades(double t_min, double t_max, double decades);

struct AsymptoticLine {
  int coefficient = 0;
  std::string note;
  double expected_exponent = 0.0;
  std::optional<double> expected_value;  // empty when data-dependent
  FitResult fit;
  double final_value = 0.0;
  double value_error = 0.0;     // relative, NaN when not applicable
  double exponent_error = 0.0;  // absolute
};

struct AsymptoticsReport {
  std::string class_id;
  StopReason terminated = StopReason::Completed;
  std::vector<AsymptoticLine> lines;
  Trajectory trajectory;
};

/// Integrates from `init` at t0 = 1 up to t_max and fits every expected law on the last decade.
/// Throws UnsupportedError if the class has no asymptotics metadata.
AsymptoticsReport asymptotics_check(const GeometryClass& cls, const CoeffVector& init, double t_max,
                                    double rtol = 1e-10, double atol = 1e-12);

/// Max relative deviation of normalized coefficients from the catalog soliton
/// over the window [t_lo, t_hi].
double soliton_deviation(const Trajectory& rescaled, const SolitonSpec& soliton);

}  // namespace homflow
