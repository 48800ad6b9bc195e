#include "homflow/rescale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "homflow/curvature.hpp"
#include "homflow/errors.hpp"

namespace homflow {

RescaledSolution::RescaledSolution(std::shared_ptr<const DenseSolution> base, double s, NormalizerSpec norm)
    : s_(s), norm_(std::move(norm)) {
  if (!(s > 0.0)) throw ValidationError("rescaling factor must be positive");
  if (!base) throw ValidationError("rescaling needs a dense solution");
  if (norm_.exponents.size() != base->size() || norm_.constants.size() != base->size())
    throw ValidationError("normalizer length does not match the coefficient count");
  for (double k : norm_.constants)
    if (!(k > 0.0) || !std::isfinite(k)) throw ValidationError("normalizer constants must be positive");
  if (auto inner = std::dynamic_pointer_cast<const RescaledSolution>(base)) {
    norm_ = compose(inner->norm_, inner->s_, norm_);
    s_ = inner->s_ * s;
    root_ = inner->root_;
  } else {
    root_ = std::move(base);
  }
}

std::vector<double> RescaledSolution::operator()(double t) const {
  std::vector<double> c = (*root_)(s_ * t);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= norm_.constants[i] * std::pow(s_, norm_.exponents[i] - 1.0);
  return c;
}

NormalizerSpec compose(const NormalizerSpec& first, double s1, const NormalizerSpec& second) {
  // kappa2 s2^{p2-1} kappa1 s1^{p1-1} c(s1 s2 t) = K (s1 s2)^{P-1} c(s1 s2 t) with P = p2,
  // absorbing the leftover powers of s1 into the constant.
  const std::size_t n = first.exponents.size();
  NormalizerSpec out;
  out.exponents = second.exponents;
  out.constants.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.constants[i] = first.constants[i] * second.constants[i] * std::pow(s1, first.exponents[i] - second.exponents[i]);
  return out;
}

NormalizerSpec identity_normalizer(std::size_t n) {
  return {std::vector<double>(n, 1.0), std::vector<double>(n, 1.0)};
}

Trajectory rescaled_trajectory(const Trajectory& traj, double s, const NormalizerSpec& norm, double t_lo,
                               double t_hi, int per_decade) {
  if (!traj.dense) throw ValidationError("trajectory has no dense output");
  if (!(t_hi > t_lo) || !(t_lo > 0.0)) throw ValidationError("need 0 < t_lo < t_hi");
  auto view = std::make_shared<RescaledSolution>(traj.dense, s, norm);
  if (!(t_lo >= view->t_min() && t_hi <= view->t_max()))
    throw RangeError("trajectory covers [" + std::to_string(traj.dense->t_min()) + ", " +
                     std::to_string(traj.dense->t_max()) + "], rescaled window needs [" +
                     std::to_string(s * t_lo) + ", " + std::to_string(s * t_hi) + "]");
  Trajectory out;
  out.geometry = traj.geometry;
  out.terminated = traj.terminated;
  out.message = traj.message;
  out.dense = view;
  out.curvature_scale = traj.curvature_scale * s;
  for (double t : log_grid(t_lo, t_hi, per_decade)) {
    Sample smp;
    smp.t = t;
    smp.coeffs = (*view)(t);
    // Sectional curvature of s^{-1} g(s t) is s K(g(s t)).
    smp.max_abs_k = out.curvature_scale * max_abs_sectional(traj.geometry, view->raw(t));
    smp.t_max_abs_k = t * smp.max_abs_k;
    out.samples.push_back(std::move(smp));
  }
  return out;
}

double tail_fraction_for_decades(double t_min, double t_max, double decades) {
  const double span = std::log10(t_max / t_min);
  if (!(span > 0.0)) return 1.0;
  return std::min(1.0, decades / span);
}

namespace {

FitResult fit_with(const std::vector<double>& lt, const std::vector<double>& lv, const std::vector<double>& llt,
                   const std::vector<double>& v, const std::vector<double>& t, double q) {
  const std::size_t n = lt.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = lv[i] - (q != 0.0 ? q * llt[i] : 0.0);
    mx += lt[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lt[i] - mx) * (lt[i] - mx);
    sxy += (lt[i] - mx) * (y[i] - my);
  }
  FitResult r;
  r.exponent = sxy / sxx;
  r.coefficient = std::exp(my - r.exponent * mx);
  r.log_power = q;
  r.model = q == 0.0 ? FitModel::PurePower : FitModel::LogCorrected;
  r.points = n;
  for (std::size_t i = 0; i < n; ++i) {
    double model = r.coefficient * std::pow(t[i], r.exponent);
    if (q != 0.0) model *= std::pow(std::log(t[i]), q);
    r.residual = std::max(r.residual, std::abs(model / v[i] - 1.0));
  }
  return r;
}

}  // namespace

FitResult fit_power_law(const std::vector<std::pair<double, double>>& samples, const FitOptions& opt) {
  if (samples.empty()) throw ValidationError("no samples to fit");
  if (!(opt.tail_fraction > 0.0) || opt.tail_fraction > 1.0) throw ValidationError("tail fraction must be in (0, 1]");
  double tmin = std::numeric_limits<double>::infinity(), tmax = 0.0;
  for (const auto& [t, v] : samples) {
    if (!(t > 0.0)) throw DomainError("fit times must be positive");
    tmin = std::min(tmin, t);
    tmax = std::max(tmax, t);
  }
  const double lcut = std::log(tmax) - opt.tail_fraction * (std::log(tmax) - std::log(tmin)) - 1e-12;
  std::vector<double> t, v, lt, lv, llt;
  for (const auto& [ti, vi] : samples) {
    if (std::log(ti) < lcut) continue;
    if (!(vi > 0.0)) throw DomainError("fit values must be positive");
    t.push_back(ti);
    v.push_back(vi);
    lt.push_back(std::log(ti));
    lv.push_back(std::log(vi));
    llt.push_back(ti > 1.0 ? std::log(std::log(ti)) : std::numeric_limits<double>::quiet_NaN());
  }
  if (t.size() < opt.min_points)
    throw ValidationError("fit window holds " + std::to_string(t.size()) + " samples, need at least " +
                          std::to_string(opt.min_points));
  const auto [lo, hi] = std::minmax_element(lt.begin(), lt.end());
  if (!(*hi > *lo)) throw ValidationError("fit window has no time spread");
  const bool logs_ok = std::all_of(t.begin(), t.end(), [](double x) { return x > 1.0; });

  if (opt.log_power) {
    if (*opt.log_power != 0.0 && !logs_ok) throw DomainError("log-corrected fit needs t > 1");
    return fit_with(lt, lv, llt, v, t, *opt.log_power);
  }
  FitResult best = fit_with(lt, lv, llt, v, t, 0.0);
  if (logs_ok) {
    for (double q : {-0.5, 0.5}) {
      FitResult r = fit_with(lt, lv, llt, v, t, q);
      if (r.residual < best.residual) best = r;
    }
  }
  return best;
}

AsymptoticsReport asymptotics_check(const GeometryClass& cls, const CoeffVector& init, double t_max, double rtol,
                                    double atol) {
  if (cls.asymptotics.empty()) throw UnsupportedError(cls.id + " has no expected asymptotics");
  FlowProblem p;
  p.cls = cls;
  p.init = init;
  p.t0 = 1.0;
  p.t1 = t_max;
  p.rtol = rtol;
  p.atol = atol;
  p.samples_per_decade = 40;
  AsymptoticsReport rep;
  rep.class_id = cls.id;
  rep.trajectory = integrate(p);
  rep.terminated = rep.trajectory.terminated;
  if (!rep.trajectory.completed()) return rep;

  const auto& smp = rep.trajectory.samples;
  const double frac = tail_fraction_for_decades(smp.front().t, smp.back().t, 1.0);
  for (const ExpectedAsymptotic& law : cls.asymptotics) {
    AsymptoticLine line;
    line.coefficient = law.coefficient;
    line.note = law.note;
    line.expected_exponent = law.exponent;
    std::vector<std::pair<double, double>> series;
    for (const Sample& s : smp) series.emplace_back(s.t, s.coeffs[law.coefficient]);
    FitOptions fo;
    fo.tail_fraction = frac;
    fo.log_power = law.log_power;
    line.fit = fit_power_law(series, fo);
    line.final_value = smp.back().coeffs[law.coefficient];
    line.exponent_error = std::abs(line.fit.exponent - law.exponent);
    line.value_error = std::numeric_limits<double>::quiet_NaN();
    if (law.value) {
      line.expected_value = law.value(init);
      // Compare the late-time value against the expected law itself, which
      // is sharper than the fitted prefactor when the exponent is known.
      const double tl = smp.back().t;
      double model = *line.expected_value * std::pow(tl, law.exponent);
      if (law.log_power != 0.0) model *= std::pow(std::log(tl), law.log_power);
      line.value_error = std::abs(line.final_value / model - 1.0);
    }
    rep.lines.push_back(std::move(line));
  }
  return rep;
}

double soliton_deviation(const Trajectory& rescaled, const SolitonSpec& soliton) {
  double worst = 0.0;
  for (const Sample& s : rescaled.samples) {
    const CoeffVector ref = soliton.coeffs(s.t);
    if (ref.size() != s.coeffs.size()) throw ValidationError("soliton and trajectory sizes differ");
    for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(s.coeffs[i] / ref[i] - 1.0));
  }
  return worst;
}

}  // namespace homflow
