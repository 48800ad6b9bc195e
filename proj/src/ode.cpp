#include "homflow/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "homflow/errors.hpp"

namespace homflow {
namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// Kahan-compensated running time.
struct CompensatedTime {
  double value;
  double carry = 0.0;
  void add(double h) {
    const double y = h - carry;
    const double t = value + y;
    carry = (t - value) - y;
    value = t;
  }
};

bool finite_all(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::Completed: return "completed";
    case StopReason::BlowUp: return "blow-up";
    case StopReason::Degenerate: return "degenerate";
  }
  return "unknown";
}

void DopriDense::append(double t0, double h, const double* rcont) {
  starts_.push_back(t0);
  widths_.push_back(h);
  rcont_.insert(rcont_.end(), rcont, rcont + 5 * n_);
  end_ = t0 + h;
}

std::vector<double> DopriDense::operator()(double t) const {
  if (starts_.empty()) throw RangeError("dense solution is empty");
  if (!(t >= t_min() && t <= t_max()))
    throw RangeError("time " + std::to_string(t) + " outside dense solution range [" +
                     std::to_string(t_min()) + ", " + std::to_string(t_max()) + "]");
  auto it = std::upper_bound(starts_.begin(), starts_.end(), t);
  const std::size_t i = it == starts_.begin() ? 0 : static_cast<std::size_t>(it - starts_.begin()) - 1;
  const double theta = (t - starts_[i]) / widths_[i];
  const double theta1 = 1.0 - theta;
  const double* r = rcont_.data() + 5 * n_ * i;
  std::vector<double> y(n_);
  for (std::size_t k = 0; k < n_; ++k)
    y[k] = r[k] + theta * (r[n_ + k] + theta1 * (r[2 * n_ + k] + theta * (r[3 * n_ + k] + theta1 * r[4 * n_ + k])));
  return y;
}

OdeResult integrate_dopri5(const OdeRhs& rhs, double t0, const std::vector<double>& y0, double t1,
                           const OdeOptions& opt) {
  if (!(t1 > t0)) throw ValidationError("integration interval must have t1 > t0");
  if (!(opt.rtol > 0.0) || !(opt.atol > 0.0)) throw ValidationError("tolerances must be positive");
  const std::size_t n = y0.size();
  auto dense = std::make_shared<DopriDense>(n);
  OdeResult res;

  std::vector<double> y = y0, ynew(n), ystage(n), k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  std::vector<double> rcont(5 * n);
  rhs(t0, y, k1);
  if (!finite_all(k1)) throw DomainError("right-hand side is not finite at the initial state");

  const double span = t1 - t0;
  double h = opt.initial_step;
  if (!(h > 0.0)) {
    // Standard starting-step heuristic based on the scaled norms of y and y'.
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sk = opt.atol + opt.rtol * std::abs(y[i]);
      dnf += (k1[i] / sk) * (k1[i] / sk);
      dny += (y[i] / sk) * (y[i] / sk);
    }
    h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 * std::max(std::abs(t0), 1e-6) : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, span);
  }
  h = std::min(h, span);

  constexpr double safe = 0.9, facc1 = 5.0, facc2 = 0.1, beta = 0.04;
  const double expo1 = 0.2 - beta * 0.75;
  double facold = 1e-4;
  CompensatedTime t{t0};
  bool last_rejected = false;

  auto stage = [&](double tt, std::vector<double>& out) -> bool {
    try {
      rhs(tt, ystage, out);
    } catch (const DomainError&) {
      return false;
    }
    return finite_all(out);
  };

  while (t.value < t1) {
    if (res.accepted + res.rejected >= opt.max_steps) {
      res.reason = StopReason::BlowUp;
      res.message = "step budget exhausted at t=" + std::to_string(t.value);
      break;
    }
    const double hmin = 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t.value), 1e-300);
    if (h < hmin) {
      res.reason = StopReason::BlowUp;
      res.message = "step size underflow at t=" + std::to_string(t.value);
      break;
    }
    bool last = false;
    if (t.value + h >= t1) {
      h = t1 - t.value;
      last = true;
    }
    const double tv = t.value;
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) ystage[i] = y[i] + h * a21 * k1[i];
    ok = ok && stage(tv + c2 * h, k2);
    if (ok) {
      for (std::size_t i = 0; i < n; ++i) ystage[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      ok = stage(tv + c3 * h, k3);
    }
    if (ok) {
      for (std::size_t i = 0; i < n; ++i) ystage[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      ok = stage(tv + c4 * h, k4);
    }
    if (ok) {
      for (std::size_t i = 0; i < n; ++i)
        ystage[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      ok = stage(tv + c5 * h, k5);
    }
    if (ok) {
      for (std::size_t i = 0; i < n; ++i)
        ystage[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      ok = stage(tv + h, k6);
    }
    if (ok) {
      for (std::size_t i = 0; i < n; ++i)
        ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
      ystage = ynew;
      ok = stage(tv + h, k7);
    }
    if (!ok) {
      h *= 0.25;
      ++res.rejected;
      last_rejected = true;
      continue;
    }

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sk = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      err += (e / sk) * (e / sk);
    }
    err = std::sqrt(err / static_cast<double>(n));
    const double fac11 = std::pow(err, expo1);
    double fac = fac11 / std::pow(facold, beta);
    fac = std::max(facc2, std::min(facc1, fac / safe));
    double hnew = h / fac;

    if (err <= 1.0) {
      facold = std::max(err, 1e-4);
      for (std::size_t i = 0; i < n; ++i) {
        const double ydiff = ynew[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        rcont[i] = y[i];
        rcont[n + i] = ydiff;
        rcont[2 * n + i] = bspl;
        rcont[3 * n + i] = ydiff - h * k7[i] - bspl;
        rcont[4 * n + i] =
            h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      dense->append(tv, h, rcont.data());
      if (last) {
        t.value = t1;
        t.carry = 0.0;
      } else {
        t.add(h);
      }
      y = ynew;
      k1 = k7;
      ++res.accepted;
      if (last_rejected) hnew = std::min(hnew, h);
      last_rejected = false;
      h = hnew;
      const bool degenerate = std::any_of(y.begin(), y.end(), [&](double v) { return !(v >= opt.degenerate_floor); });
      if (degenerate) {
        res.reason = StopReason::Degenerate;
        res.message = "coefficient fell below " + std::to_string(opt.degenerate_floor) + " at t=" +
                      std::to_string(t.value);
        break;
      }
    } else {
      hnew = h / std::min(facc1, fac11 / safe);
      last_rejected = true;
      ++res.rejected;
      h = hnew;
    }
  }
  res.dense = std::move(dense);
  return res;
}

}  // namespace homflow
