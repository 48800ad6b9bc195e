#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "homflow/bundle_kernels.hpp"

namespace homflow {

/// Flat R^N-bundle metric h(alpha) dalpha^2 + G_ij(alpha) dx^i dx^j over a circle
/// with coordinate alpha in [0, 2 pi) and twist G(alpha + 2 pi) = rho G(alpha) rho^T.
struct BundleState {
  int N = 2;
  int M = 0;
  std::vector<double> h;  // M base metric values
  std::vector<double> G;  // M blocks of N*N, column-major
  Eigen::MatrixXd rho;
  double t = 1.0;

  double dalpha() const;
  Eigen::MatrixXd fiber(int j) const;
  void set_fiber(int j, const Eigen::MatrixXd& Gj);

  /// Throws ConfigError for M < 8 or N outside [1, 4], ValidationError for
  /// nonpositive h or fibers that are not unit-determinant SPD matrices.
  void validate() const;
};

enum class SeedKind { Constant, Geodesic, Fourier };

struct BundleSeed {
  SeedKind kind = SeedKind::Geodesic;
  double amplitude = 0.1;  // Fourier perturbation size
  int modes = 2;
  std::uint64_t seed = 1;
  /// Base metric: a constant value, or (when empty) the smallest value with
  /// nonnegative Einstein residual at t0 times (1 + margin).
  std::optional<double> h_value;
  double h_margin = 0.05;
};

SeedKind parse_seed_kind(const std::string& s);
std::string to_string(SeedKind k);

/// X = 2 log rho for symmetric positive-definite rho, so that
/// G(alpha) = exp(alpha X / 2 pi) is twist-compatible.
Eigen::MatrixXd holonomy_generator(const Eigen::MatrixXd& rho);

BundleState make_bundle_state(int N, int M, const Eigen::MatrixXd& rho, double t0, const BundleSeed& seed);

/// Soliton base metric (t/2) Tr((X/2pi)^2) for the geodesic with generator X.
double geodesic_soliton_h(const Eigen::MatrixXd& X, double t);

ExtendedGrid extend(const BundleState& s);

struct ResidualNorms {
  double harmonic = 0.0;  // max entry of the harmonic residual field
  double einstein = 0.0;  // max |einstein residual|
  double einstein_min = 0.0;  // spatial minimum (maximum-principle monitor)
};

std::vector<Eigen::MatrixXd> harmonic_residual(const BundleState& s, Backend b = Backend::Serial);

/// -1/4 Tr((G^{-1} G')^2) + h / (2t) per grid point (R_{alpha alpha} = 0 in 1D).
std::vector<double> einstein_residual(const BundleState& s, Backend b = Backend::Serial);

ResidualNorms residual_norms(const BundleState& s, Backend b = Backend::Serial);

/// t^{-1/2} sum sqrt(h) dalpha.
double v_tilde(const BundleState& s);

/// 1/2 sum h^{-1/2} Tr((G^{-1} G')^2) dalpha.
double energy(const BundleState& s, Backend b = Backend::Serial);

/// G -> A G A^T on every fiber and rho -> A rho A^{-1}.
BundleState apply_gauge(const BundleState& s, const Eigen::MatrixXd& A);

struct BundleRecord {
  double t = 0.0;
  double energy = 0.0;
  double v_tilde = 0.0;
  double max_harmonic_residual = 0.0;
  double max_einstein_residual = 0.0;
  double det_drift = 0.0;  // largest |det G - 1| before renormalization since the previous record
  double min_einstein_residual = 0.0;
};

struct BundleFlowOptions {
  double cfl = 0.4;  // dt <= cfl * min(h) * dalpha^2
  std::optional<double> max_dt;
  int records_per_decade = 10;
  bool freeze_base = false;  // pure harmonic-map heat flow
  Backend backend = Backend::Serial;
  std::size_t max_steps = 50'000'000;
};

struct BundleRun {
  std::vector<BundleRecord> records;
  BundleState final_state;
  std::size_t steps = 0;
  std::size_t rejected = 0;
  double max_v_tilde_increase = 0.0;  // max over steps of V(t_{k+1}) - V(t_k)
  double max_energy_increase = 0.0;
  double max_det_drift = 0.0;
};

/// RK4 method of lines up to t1. Throws DomainError when h leaves the positive
/// cone; a max_dt above the CFL bound is rejected and replaced by the bound.
BundleRun bundle_flow(const BundleState& initial, double t1, const BundleFlowOptions& opt = {});

}  // namespace homflow
