#pragma once

#include <memory>
#include <string>
#include <vector>

#include "homflow/catalog.hpp"
#include "homflow/ode.hpp"

namespace homflow {

struct FlowProblem {
  GeometryClass cls;
  CoeffVector init;  // coefficients at t0
  double t0 = 1e-3;
  double t1 = 1.0;
  double rtol = 1e-9;
  double atol = 1e-12;
  int samples_per_decade = 20;

  /// Throws ValidationError when the invariants 0 < t0 < t1, init > 0, tol > 0 fail.
  void validate() const;
};

struct Sample {
  double t = 0.0;
  CoeffVector coeffs;
  double max_abs_k = 0.0;
  double t_max_abs_k = 0.0;
};

struct Trajectory {
  Geometry geometry;
  std::vector<Sample> samples;
  StopReason terminated = StopReason::Completed;
  std::string message;
  /// Continuous solution behind the samples.
  std::shared_ptr<const DenseSolution> dense;
  /// Sectional curvature of the stored coefficients is multiplied by this factor
  /// (rescaled trajectories report s * K(st)).
  double curvature_scale = 1.0;

  bool completed() const { return terminated == StopReason::Completed; }
};

/// Ricci-flow velocity of the coefficient vector. Classes with a hand-written
/// system use it; everything else uses -2 Ric in the representative frame direction.
CoeffVector rhs(const GeometryClass& cls, const CoeffVector& coeffs);

/// Generic path only: -2 Ric from the curvature engine.
CoeffVector ricci_rhs(const Geometry& geo, const CoeffVector& coeffs);

Trajectory integrate(const FlowProblem& problem);

/// Log-spaced times from t0 to t1 inclusive, `per_decade` per factor of ten.
std::vector<double> log_grid(double t0, double t1, int per_decade);

/// Builds samples from a dense solution on the given grid.
std::vector<Sample> sample(const Geometry& geo, const DenseSolution& sol, const std::vector<double>& times,
                           double curvature_scale = 1.0);

struct ClosedForm {
  CoeffVector values;
  std::vector<bool> exact;  // false where only asymptotics are known (value is NaN)
};

/// Exact solution with value `init` at time t_init, evaluated at t >= t_init.
/// Throws UnsupportedError for classes without a closed form.
ClosedForm closed_form(const GeometryClass& cls, const CoeffVector& init, double t, double t_init = 0.0);

bool has_closed_form(ClassId kind);

/// max over samples of t * max|K|.
double type_iii_sup(const Trajectory& traj);

}  // namespace homflow
