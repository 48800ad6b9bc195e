#include "homflow/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <random>

#include "homflow/errors.hpp"
#include "homflow/flow.hpp"
#include "homflow/symspace.hpp"

namespace homflow {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Map = Eigen::Map<Eigen::MatrixXd>;
using CMap = Eigen::Map<const Eigen::MatrixXd>;

void check_holonomy(const Eigen::MatrixXd& rho, int N) {
  if (rho.rows() != N || rho.cols() != N)
    throw ConfigError("holonomy must be " + std::to_string(N) + "x" + std::to_string(N));
  if (std::abs(std::abs(rho.determinant()) - 1.0) > 1e-12) throw ConfigError("holonomy must have determinant +-1");
}

// Velocity fields of a state; dh and dG sized M and M*N*N.
void velocity(const BundleState& s, std::vector<double>& dh, std::vector<double>& dG, Backend b) {
  const ExtendedGrid g = extend(s);
  dh.resize(static_cast<std::size_t>(s.M));
  dG.resize(static_cast<std::size_t>(s.M) * s.N * s.N);
  bundle_velocity(g, dh.data(), dG.data(), b);
}

double sum_energy(const BundleState& s, const std::vector<double>& dh) {
  // dh = 1/2 Tr(...), so the integrand 1/2 h^{-1/2} Tr is h^{-1/2} dh.
  double e = 0.0;
  for (int j = 0; j < s.M; ++j) e += dh[j] / std::sqrt(s.h[j]);
  return e * s.dalpha();
}

ResidualNorms norms_from(const BundleState& s, const std::vector<double>& dh, const std::vector<double>& dG) {
  ResidualNorms r;
  for (double v : dG) r.harmonic = std::max(r.harmonic, std::abs(v));
  r.einstein_min = std::numeric_limits<double>::infinity();
  for (int j = 0; j < s.M; ++j) {
    const double q = -0.5 * dh[j] + s.h[j] / (2.0 * s.t);
    r.einstein = std::max(r.einstein, std::abs(q));
    r.einstein_min = std::min(r.einstein_min, q);
  }
  return r;
}

}  // namespace

double BundleState::dalpha() const { return kTwoPi / M; }

Eigen::MatrixXd BundleState::fiber(int j) const { return CMap(G.data() + static_cast<std::size_t>(j) * N * N, N, N); }

void BundleState::set_fiber(int j, const Eigen::MatrixXd& Gj) {
  Map(G.data() + static_cast<std::size_t>(j) * N * N, N, N) = Gj;
}

void BundleState::validate() const {
  if (M < 8) throw ConfigError("grid needs at least 8 points, got " + std::to_string(M));
  if (N < 1 || N > 4) throw ConfigError("fiber dimension must be between 1 and 4");
  check_holonomy(rho, N);
  if (static_cast<int>(h.size()) != M || G.size() != static_cast<std::size_t>(M) * N * N)
    throw ValidationError("bundle field sizes do not match the grid");
  if (!(t > 0.0)) throw ValidationError("bundle time must be positive");
  for (int j = 0; j < M; ++j) {
    if (!(h[j] > 0.0)) throw ValidationError("base metric must be positive at every grid point");
    check_sym_space_point(fiber(j), 1e-14, 1e-10);
  }
}

SeedKind parse_seed_kind(const std::string& s) {
  if (s == "constant") return SeedKind::Constant;
  if (s == "geodesic") return SeedKind::Geodesic;
  if (s == "fourier") return SeedKind::Fourier;
  throw ConfigError("unknown seed '" + s + "' (expected constant, geodesic or fourier)");
}

std::string to_string(SeedKind k) {
  switch (k) {
    case SeedKind::Constant: return "constant";
    case SeedKind::Geodesic: return "geodesic";
    case SeedKind::Fourier: return "fourier";
  }
  return "unknown";
}

Eigen::MatrixXd holonomy_generator(const Eigen::MatrixXd& rho) {
  if ((rho - rho.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw ConfigError("geodesic seeds need a symmetric positive-definite holonomy");
  Eigen::LLT<Eigen::MatrixXd> llt(rho);
  if (llt.info() != Eigen::Success) throw ConfigError("geodesic seeds need a symmetric positive-definite holonomy");
  Eigen::MatrixXd X = 2.0 * spd_log(rho);
  X -= (X.trace() / X.rows()) * Eigen::MatrixXd::Identity(X.rows(), X.cols());
  return 0.5 * (X + X.transpose());
}

double geodesic_soliton_h(const Eigen::MatrixXd& X, double t) {
  const Eigen::MatrixXd Y = X / kTwoPi;
  return 0.5 * t * (Y * Y).trace();
}

ExtendedGrid extend(const BundleState& s) {
  ExtendedGrid g;
  g.M = s.M;
  g.N = s.N;
  g.dalpha = s.dalpha();
  const int nn = s.N * s.N;
  g.h.resize(static_cast<std::size_t>(s.M) + 4);
  g.G.resize((static_cast<std::size_t>(s.M) + 4) * nn);
  std::copy(s.h.begin(), s.h.end(), g.h.begin() + 2);
  std::copy(s.G.begin(), s.G.end(), g.G.begin() + 2 * nn);
  g.h[0] = s.h[s.M - 2];
  g.h[1] = s.h[s.M - 1];
  g.h[s.M + 2] = s.h[0];
  g.h[s.M + 3] = s.h[1];
  const Eigen::MatrixXd rinv = s.rho.inverse();
  for (int k = 0; k < 2; ++k) {
    // alpha - 2 pi side: G(alpha - 2pi) = rho^{-1} G(alpha) rho^{-T}.
    Map(g.G.data() + k * nn, s.N, s.N) = rinv * s.fiber(s.M - 2 + k) * rinv.transpose();
    Map(g.G.data() + (s.M + 2 + k) * nn, s.N, s.N) = s.rho * s.fiber(k) * s.rho.transpose();
  }
  return g;
}

BundleState make_bundle_state(int N, int M, const Eigen::MatrixXd& rho, double t0, const BundleSeed& seed) {
  if (M < 8) throw ConfigError("grid needs at least 8 points, got " + std::to_string(M));
  if (N < 1 || N > 4) throw ConfigError("fiber dimension must be between 1 and 4");
  if (!(t0 > 0.0)) throw ConfigError("t0 must be positive");
  check_holonomy(rho, N);
  BundleState s;
  s.N = N;
  s.M = M;
  s.rho = rho;
  s.t = t0;
  s.h.assign(static_cast<std::size_t>(M), 1.0);
  s.G.assign(static_cast<std::size_t>(M) * N * N, 0.0);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(N, N);

  switch (seed.kind) {
    case SeedKind::Constant:
      if ((rho * rho.transpose() - I).cwiseAbs().maxCoeff() > 1e-12)
        throw ConfigError("a constant fiber metric is only twist-compatible for orthogonal holonomy");
      for (int j = 0; j < M; ++j) s.set_fiber(j, I);
      break;
    case SeedKind::Geodesic: {
      const Eigen::MatrixXd X = holonomy_generator(rho);
      for (int j = 0; j < M; ++j) s.set_fiber(j, sym_space_exp(X, (j * s.dalpha()) / kTwoPi));
      break;
    }
    case SeedKind::Fourier: {
      if (seed.modes < 1) throw ConfigError("fourier seed needs at least one mode");
      const Eigen::MatrixXd half = 0.5 * holonomy_generator(rho);
      std::mt19937_64 rng(seed.seed);
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      std::vector<Eigen::MatrixXd> Y;
      std::vector<double> phase;
      for (int k = 0; k < seed.modes; ++k) {
        Eigen::MatrixXd A(N, N);
        for (int a = 0; a < N; ++a)
          for (int b = 0; b < N; ++b) A(a, b) = unit(rng);
        Eigen::MatrixXd S = 0.5 * (A + A.transpose());
        S -= (S.trace() / N) * I;
        const double nrm = S.norm();
        Y.push_back(nrm > 0.0 ? Eigen::MatrixXd(S / nrm) : S);
        phase.push_back(std::numbers::pi * (unit(rng) + 1.0));
      }
      for (int j = 0; j < M; ++j) {
        const double a = j * s.dalpha();
        Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(N, N);
        for (int k = 0; k < seed.modes; ++k) Z += (seed.amplitude / (k + 1)) * std::sin((k + 1) * a + phase[k]) * Y[k];
        const Eigen::MatrixXd P = sym_space_exp(half, a / kTwoPi);
        Eigen::MatrixXd Gj = P * sym_space_exp(0.5 * (Z + Z.transpose()), 1.0) * P;
        s.set_fiber(j, 0.5 * (Gj + Gj.transpose()));
      }
      break;
    }
  }

  if (seed.h_value) {
    if (!(*seed.h_value > 0.0)) throw ConfigError("base metric value must be positive");
    s.h.assign(static_cast<std::size_t>(M), *seed.h_value);
  } else if (seed.kind == SeedKind::Geodesic && geodesic_soliton_h(holonomy_generator(rho), t0) > 0.0) {
    s.h.assign(static_cast<std::size_t>(M), geodesic_soliton_h(holonomy_generator(rho), t0));
  } else if (seed.kind == SeedKind::Fourier) {
    std::vector<double> dh, dG;
    velocity(s, dh, dG, Backend::Serial);
    // Einstein residual h/(2t) - dh/2 >= 0 everywhere needs h >= t max(dh).
    const double need = t0 * *std::max_element(dh.begin(), dh.end());
    if (need > 0.0) s.h.assign(static_cast<std::size_t>(M), need * (1.0 + seed.h_margin));
  }
  s.validate();
  return s;
}

std::vector<Eigen::MatrixXd> harmonic_residual(const BundleState& s, Backend b) {
  std::vector<double> dh, dG;
  velocity(s, dh, dG, b);
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<std::size_t>(s.M));
  for (int j = 0; j < s.M; ++j) out.emplace_back(CMap(dG.data() + static_cast<std::size_t>(j) * s.N * s.N, s.N, s.N));
  return out;
}

std::vector<double> einstein_residual(const BundleState& s, Backend b) {
  std::vector<double> dh, dG;
  velocity(s, dh, dG, b);
  std::vector<double> out(static_cast<std::size_t>(s.M));
  for (int j = 0; j < s.M; ++j) out[j] = -0.5 * dh[j] + s.h[j] / (2.0 * s.t);
  return out;
}

ResidualNorms residual_norms(const BundleState& s, Backend b) {
  std::vector<double> dh, dG;
  velocity(s, dh, dG, b);
  return norms_from(s, dh, dG);
}

double v_tilde(const BundleState& s) {
  double v = 0.0;
  for (double h : s.h) v += std::sqrt(h);
  return v * s.dalpha() / std::sqrt(s.t);
}

double energy(const BundleState& s, Backend b) {
  std::vector<double> dh, dG;
  velocity(s, dh, dG, b);
  return sum_energy(s, dh);
}

BundleState apply_gauge(const BundleState& s, const Eigen::MatrixXd& A) {
  if (A.rows() != s.N || A.cols() != s.N) throw ValidationError("gauge matrix has the wrong size");
  BundleState out = s;
  for (int j = 0; j < s.M; ++j) {
    Eigen::MatrixXd Gj = A * s.fiber(j) * A.transpose();
    out.set_fiber(j, 0.5 * (Gj + Gj.transpose()));
  }
  out.rho = A * s.rho * A.inverse();
  return out;
}

BundleRun bundle_flow(const BundleState& initial, double t1, const BundleFlowOptions& opt) {
  initial.validate();
  if (!(t1 > initial.t)) throw ConfigError("t1 must exceed the initial time");
  if (!(opt.cfl > 0.0)) throw ConfigError("CFL factor must be positive");
  if (opt.records_per_decade < 1) throw ConfigError("records per decade must be at least 1");

  const int M = initial.M, N = initial.N, nn = N * N;
  const std::size_t nG = static_cast<std::size_t>(M) * nn;
  const double d2 = initial.dalpha() * initial.dalpha();

  BundleRun run;
  BundleState y = initial, stage = initial;
  std::vector<double> k1h, k1G, k2h, k2G, k3h, k3G, k4h, k4G;

  const std::vector<double> record_times = log_grid(initial.t, t1, opt.records_per_decade);
  std::size_t next_record = 0;
  double drift_since_record = 0.0;
  double v_prev = v_tilde(y);
  double e_prev = 0.0;
  bool have_energy = false;

  auto eval = [&](const BundleState& s, std::vector<double>& dh, std::vector<double>& dG) {
    velocity(s, dh, dG, opt.backend);
    if (opt.freeze_base) std::fill(dh.begin(), dh.end(), 0.0);
  };
  auto combine = [&](const BundleState& base, double a, const std::vector<double>& dh, const std::vector<double>& dG,
                     BundleState& out) {
    for (int j = 0; j < M; ++j) out.h[j] = base.h[j] + a * dh[j];
    for (std::size_t i = 0; i < nG; ++i) out.G[i] = base.G[i] + a * dG[i];
  };

  while (true) {
    // k1 doubles as the diagnostic evaluation of the current state.
    velocity(y, k1h, k1G, opt.backend);
    const double e_now = sum_energy(y, k1h);
    if (have_energy) run.max_energy_increase = std::max(run.max_energy_increase, e_now - e_prev);
    e_prev = e_now;
    have_energy = true;

    if (next_record < record_times.size() && y.t >= record_times[next_record]) {
      const ResidualNorms rn = norms_from(y, k1h, k1G);
      run.records.push_back({y.t, e_now, v_tilde(y), rn.harmonic, rn.einstein, drift_since_record, rn.einstein_min});
      drift_since_record = 0.0;
      ++next_record;
    }
    if (y.t >= t1) break;
    if (run.steps >= opt.max_steps) throw DomainError("bundle flow exceeded the step budget");
    if (opt.freeze_base) std::fill(k1h.begin(), k1h.end(), 0.0);

    const double hmin = *std::min_element(y.h.begin(), y.h.end());
    double dt = opt.cfl * hmin * d2;
    if (opt.max_dt) {
      if (*opt.max_dt > dt)
        ++run.rejected;
      else
        dt = *opt.max_dt;
    }
    const double target = record_times[next_record];
    bool land = false;
    if (y.t + dt >= target) {
      dt = target - y.t;
      land = true;
    }

    combine(y, 0.5 * dt, k1h, k1G, stage);
    eval(stage, k2h, k2G);
    combine(y, 0.5 * dt, k2h, k2G, stage);
    eval(stage, k3h, k3G);
    combine(y, dt, k3h, k3G, stage);
    eval(stage, k4h, k4G);

    const double w = dt / 6.0;
    for (int j = 0; j < M; ++j) {
      y.h[j] += w * (k1h[j] + 2.0 * k2h[j] + 2.0 * k3h[j] + k4h[j]);
      if (!(y.h[j] > 0.0))
        throw DomainError("base metric became nonpositive at grid point " + std::to_string(j) + ", t=" +
                          std::to_string(y.t + dt));
    }
    for (std::size_t i = 0; i < nG; ++i) y.G[i] += w * (k1G[i] + 2.0 * k2G[i] + 2.0 * k3G[i] + k4G[i]);
    for (int j = 0; j < M; ++j) {
      Map Gj(y.G.data() + static_cast<std::size_t>(j) * nn, N, N);
      Eigen::MatrixXd sym = 0.5 * (Gj + Gj.transpose());
      const double det = sym.determinant();
      if (!(det > 0.0)) throw DomainError("fiber metric lost positivity at grid point " + std::to_string(j));
      drift_since_record = std::max(drift_since_record, std::abs(det - 1.0));
      run.max_det_drift = std::max(run.max_det_drift, std::abs(det - 1.0));
      Gj = sym / std::pow(det, 1.0 / N);
    }
    y.t = land ? target : y.t + dt;
    ++run.steps;

    const double v_now = v_tilde(y);
    run.max_v_tilde_increase = std::max(run.max_v_tilde_increase, v_now - v_prev);
    v_prev = v_now;
  }
  run.final_state = std::move(y);
  return run;
}

}  // namespace homflow
