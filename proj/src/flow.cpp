#include "homflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "homflow/curvature.hpp"
#include "homflow/errors.hpp"
#include "homflow/tables.hpp"

namespace homflow {
namespace {

void require_positive(const CoeffVector& x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] > 0.0))
      throw DomainError("coefficient " + std::to_string(i + 1) + " is not positive (" + std::to_string(x[i]) + ")");
}

}  // namespace

void FlowProblem::validate() const {
  if (!(t0 > 0.0) || !(t1 > t0)) throw ValidationError("need 0 < t0 < t1");
  if (static_cast<int>(init.size()) != cls.coefficient_count())
    throw ValidationError(cls.id + " takes " + std::to_string(cls.coefficient_count()) + " coefficients, got " +
                          std::to_string(init.size()));
  for (double v : init)
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("initial coefficients must be positive and finite");
  if (!(rtol > 0.0) || !(atol > 0.0)) throw ValidationError("tolerances must be positive");
  if (samples_per_decade < 1) throw ValidationError("samples per decade must be at least 1");
}

CoeffVector ricci_rhs(const Geometry& geo, const CoeffVector& coeffs) {
  require_positive(coeffs);
  const Eigen::MatrixXd ric = ricci(geo, coeffs);
  CoeffVector d(coeffs.size());
  for (int j = 0; j < geo.coefficient_count(); ++j) {
    const int a = geo.representative_frame_index(j);
    d[j] = -2.0 * ric(a, a);
  }
  return d;
}

CoeffVector rhs(const GeometryClass& cls, const CoeffVector& coeffs) {
  require_positive(coeffs);
  if (auto d = transcribed_rhs(cls, coeffs)) return *d;
  return ricci_rhs(cls.geometry, coeffs);
}

std::vector<double> log_grid(double t0, double t1, int per_decade) {
  std::vector<double> ts;
  const double decades = std::log10(t1 / t0);
  const auto n = static_cast<long>(std::ceil(decades * per_decade - 1e-9));
  ts.reserve(static_cast<std::size_t>(n) + 1);
  ts.push_back(t0);
  for (long k = 1; k < n; ++k) ts.push_back(t0 * std::pow(10.0, static_cast<double>(k) / per_decade));
  if (t1 > ts.back()) ts.push_back(t1);
  return ts;
}

std::vector<Sample> sample(const Geometry& geo, const DenseSolution& sol, const std::vector<double>& times,
                           double curvature_scale) {
  std::vector<Sample> out;
  out.reserve(times.size());
  for (double t : times) {
    Sample s;
    s.t = t;
    s.coeffs = sol(t);
    s.max_abs_k = curvature_scale * max_abs_sectional(geo, s.coeffs);
    s.t_max_abs_k = t * s.max_abs_k;
    out.push_back(std::move(s));
  }
  return out;
}

Trajectory integrate(const FlowProblem& p) {
  p.validate();
  const GeometryClass& cls = p.cls;
  OdeRhs f = [&cls](double, const std::vector<double>& y, std::vector<double>& dy) { dy = rhs(cls, y); };
  OdeOptions opt;
  opt.rtol = p.rtol;
  opt.atol = p.atol;
  OdeResult r = integrate_dopri5(f, p.t0, p.init, p.t1, opt);

  Trajectory traj;
  traj.geometry = cls.geometry;
  traj.terminated = r.reason;
  traj.message = r.message;
  traj.dense = r.dense;
  if (r.dense->steps() == 0) {
    Sample s{p.t0, p.init, max_abs_sectional(cls.geometry, p.init), 0.0};
    s.t_max_abs_k = p.t0 * s.max_abs_k;
    traj.samples.push_back(std::move(s));
    return traj;
  }
  std::vector<double> times = log_grid(p.t0, p.t1, p.samples_per_decade);
  const double tend = r.dense->t_max();
  times.erase(std::remove_if(times.begin(), times.end(), [tend](double t) { return t > tend; }), times.end());
  if (!traj.completed() && times.back() < tend) times.push_back(tend);
  traj.samples = sample(cls.geometry, *r.dense, times);
  if (!traj.completed()) {
    // Drop trailing samples that already left the positive cone.
    while (!traj.samples.empty() &&
           std::any_of(traj.samples.back().coeffs.begin(), traj.samples.back().coeffs.end(),
                       [](double v) { return !(v > 0.0); }))
      traj.samples.pop_back();
  }
  return traj;
}

bool has_closed_form(ClassId kind) {
  switch (kind) {
    case ClassId::R1: case ClassId::R2: case ClassId::R3: case ClassId::A1:
    case ClassId::H2: case ClassId::H3: case ClassId::H4: case ClassId::CH2:
    case ClassId::NIL3: case ClassId::A2: case ClassId::A6: case ClassId::A7: case ClassId::A8:
      return true;
    default:
      return false;
  }
}

ClosedForm closed_form(const GeometryClass& cls, const CoeffVector& x, double t, double t_init) {
  if (!has_closed_form(cls.kind)) throw UnsupportedError("no closed-form solution for " + cls.id);
  if (static_cast<int>(x.size()) != cls.coefficient_count())
    throw ValidationError(cls.id + " takes " + std::to_string(cls.coefficient_count()) + " coefficients");
  require_positive(x);
  const double tau = t - t_init;
  if (tau < 0.0) throw RangeError("closed form is evaluated forward from the initial time only");

  ClosedForm out{CoeffVector(x.size()), std::vector<bool>(x.size(), true)};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  switch (cls.kind) {
    case ClassId::NIL3: {
      const double u = 1.0 + 3.0 * x[0] * tau / (x[1] * x[2]);
      out.values = {x[0] * std::cbrt(1.0 / u), x[1] * std::cbrt(u), x[2] * std::cbrt(u)};
      break;
    }
    case ClassId::A2: {
      const double k = cls.params.k;
      out.values = {x[0], x[1], x[2], x[3] + 4.0 * (k * k + k + 1.0) * tau};
      break;
    }
    case ClassId::A6: {
      const double e = std::cbrt(3.0 * x[1] / (x[0] * x[3]) * tau + 1.0);
      const double f = std::cbrt(3.0 * x[2] / (x[1] * x[3]) * tau + 1.0);
      out.values = {x[0] * e, x[1] * f / e, x[2] / f, x[3] * e * f};
      break;
    }
    case ClassId::A7:
    case ClassId::A8: {
      const double u = 1.0 + 3.0 * x[3] * tau / (x[1] * x[2]);
      out.values = {nan, nan, nan, x[3] / std::cbrt(u)};
      out.exact = {false, false, false, true};
      break;
    }
    case ClassId::H2: case ClassId::H3: case ClassId::H4: case ClassId::CH2:
      out.values = {x[0] + 2.0 * cls.params.c * tau};
      break;
    default:  // flat
      out.values = x;
      break;
  }
  return out;
}

double type_iii_sup(const Trajectory& traj) {
  double best = 0.0;
  for (const Sample& s : traj.samples) best = std::max(best, s.t_max_abs_k);
  return best;
}

}  // namespace homflow
