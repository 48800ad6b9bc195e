#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace homflow {

/// Continuous solution y(t) on [t_min, t_max].
class DenseSolution {
 public:
  virtual ~DenseSolution() = default;
  virtual double t_min() const = 0;
  virtual double t_max() const = 0;
  virtual std::size_t size() const = 0;
  virtual std::vector<double> operator()(double t) const = 0;
  bool covers(double t) const { return t >= t_min() && t <= t_max(); }
};

/// Piecewise quartic continuous extension of the Dormand-Prince pairs.
class DopriDense final : public DenseSolution {
 public:
  explicit DopriDense(std::size_t n) : n_(n) {}

  double t_min() const override { return starts_.empty() ? 0.0 : starts_.front(); }
  double t_max() const override { return end_; }
  std::size_t size() const override { return n_; }
  std::vector<double> operator()(double t) const override;

  std::size_t steps() const { return starts_.size(); }
  double step_start(std::size_t i) const { return starts_[i]; }

  void append(double t0, double h, const double* rcont);  // rcont has 5 * n entries

 private:
  std::size_t n_;
  std::vector<double> starts_;
  std::vector<double> widths_;
  std::vector<double> rcont_;
  double end_ = 0.0;
};

using OdeRhs = std::function<void(double t, const std::vector<double>& y, std::vector<double>& dydt)>;

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 selects a step automatically
  std::size_t max_steps = 5'000'000;
  /// Smallest coefficient that still counts as a nondegenerate state.
  double degenerate_floor = 1e-300;
};

enum class StopReason { Completed, BlowUp, Degenerate };

std::string to_string(StopReason r);

struct OdeResult {
  std::shared_ptr<const DopriDense> dense;
  StopReason reason = StopReason::Completed;
  std::string message;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Adaptive Dormand-Prince 5(4) with PI step-size control. The right-hand side may
/// throw DomainError on an inadmissible stage, which is treated as a rejected step.
/// Integration stops early with BlowUp when the step underflows and with
/// Degenerate when a component drops below the floor.
OdeResult integrate_dopri5(const OdeRhs& rhs, double t0, const std::vector<double>& y0, double t1,
                           const OdeOptions& opt);

}  // namespace homflow
