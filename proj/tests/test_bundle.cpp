#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "homflow/bundle.hpp"
#include "homflow/bundle_curvature.hpp"
#include "homflow/curvature.hpp"
#include "homflow/errors.hpp"
#include "homflow/symspace.hpp"

using namespace homflow;

namespace {

Eigen::MatrixXd rho2() {
  Eigen::MatrixXd r(2, 2);
  r << 2.0, 1.0, 1.0, 1.0;
  return r;
}

BundleState geodesic(int M, double t = 1.0) {
  BundleSeed s;
  s.kind = SeedKind::Geodesic;
  s.h_value = geodesic_soliton_h(holonomy_generator(rho2()), t);
  return make_bundle_state(2, M, rho2(), t, s);
}

BundleState fourier(int N, int M, std::uint64_t seed) {
  BundleSeed s;
  s.kind = SeedKind::Fourier;
  s.seed = seed;
  s.modes = 3;
  Eigen::MatrixXd rho = Eigen::MatrixXd::Identity(N, N);
  if (N == 2) rho = rho2();
  return make_bundle_state(N, M, rho, 1.0, s);
}

// jet of alpha -> exp(alpha X) exp(sin(alpha) Y) exp(alpha X)^T with generic X, Y
BundleJet curved_jet(double alpha) {
  Eigen::MatrixXd X(2, 2), Y(2, 2);
  X << 0.3, 0.2, -0.1, -0.3;
  Y << 0.4, 0.1, 0.1, -0.4;
  auto G = [&](double a) {
    const Eigen::MatrixXd P = (a * X).exp();
    return Eigen::MatrixXd(P * (std::sin(a) * Y).exp() * P.transpose());
  };
  const double e = 1e-3;
  BundleJet j;
  j.G = G(alpha);
  j.G_a = (G(alpha - 2 * e) - 8 * G(alpha - e) + 8 * G(alpha + e) - G(alpha + 2 * e)) / (12 * e);
  j.G_aa = (-G(alpha - 2 * e) + 16 * G(alpha - e) - 30 * G(alpha) + 16 * G(alpha + e) - G(alpha + 2 * e)) / (12 * e * e);
  j.h = 1.5 + 0.3 * std::cos(alpha);
  j.h_a = -0.3 * std::sin(alpha);
  return j;
}

}  // namespace

TEST_CASE("geodesic seed is twist compatible and unimodular") {
  const BundleState s = geodesic(32);
  CHECK_NOTHROW(s.validate());
  const Eigen::MatrixXd last = s.rho * s.fiber(0) * s.rho.transpose();
  // G(2 pi) = rho G(0) rho^T equals exp(X) = rho^2 for G(0) = I
  CHECK((last - s.rho * s.rho).cwiseAbs().maxCoeff() < 1e-12);
  for (int j = 0; j < s.M; ++j) CHECK(s.fiber(j).determinant() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("soliton base metric of the geodesic") {
  const Eigen::MatrixXd X = holonomy_generator(rho2());
  const double expected = 0.5 * (X * X).trace() / (4.0 * std::numbers::pi * std::numbers::pi);
  CHECK(geodesic_soliton_h(X, 2.0) == doctest::Approx(2.0 * expected));
  CHECK(geodesic_soliton_h(X, 1.0) == doctest::Approx(0.093850).epsilon(1e-4));
}

TEST_CASE("harmonic residual of the geodesic converges at fourth order") {
  double prev = 0.0;
  for (int M : {32, 64, 128}) {
    const double r = residual_norms(geodesic(M)).harmonic;
    if (prev > 0.0) CHECK(std::log2(prev / r) > 3.7);
    prev = r;
  }
}

TEST_CASE("Einstein residual vanishes on soliton data") {
  CHECK(residual_norms(geodesic(256)).einstein < 1e-9);
  CHECK(residual_norms(geodesic(256, 5.0)).einstein < 1e-9);
}

TEST_CASE("residuals and V~ are invariant under constant gauge changes") {
  const BundleState s = fourier(2, 64, 3);
  Eigen::MatrixXd A(2, 2);
  A << 1.3, 0.4, -0.2, 0.7;
  A /= std::sqrt(A.determinant());
  const BundleState g = apply_gauge(s, A);
  const ResidualNorms a = residual_norms(s);
  const auto ea = einstein_residual(s), eb = einstein_residual(g);
  for (std::size_t j = 0; j < ea.size(); ++j) CHECK(eb[j] == doctest::Approx(ea[j]).epsilon(1e-10));
  CHECK(v_tilde(g) == doctest::Approx(v_tilde(s)));
  CHECK(energy(g) == doctest::Approx(energy(s)).epsilon(1e-10));
  // the harmonic residual transforms as a tangent vector: A R A^T
  const auto ha = harmonic_residual(s), hb = harmonic_residual(g);
  for (std::size_t j = 0; j < ha.size(); ++j)
    CHECK((A * ha[j] * A.transpose() - hb[j]).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + a.harmonic));
}

TEST_CASE("flow decreases V~ and energy and keeps det G = 1") {
  const BundleState s = fourier(2, 64, 9);
  const BundleRun run = bundle_flow(s, 5.0);
  CHECK(run.max_v_tilde_increase <= 0.0);
  CHECK(run.max_energy_increase <= 0.0);
  CHECK(run.max_det_drift < 1e-6);
  for (int j = 0; j < run.final_state.M; ++j) CHECK_NOTHROW(check_sym_space_point(run.final_state.fiber(j), 1e-14, 1e-12));
  CHECK(run.records.front().t == 1.0);
  CHECK(run.records.back().t == 5.0);
}

TEST_CASE("frozen base runs the harmonic map heat flow") {
  BundleFlowOptions opt;
  opt.freeze_base = true;
  const BundleState s = fourier(3, 48, 4);
  const BundleRun run = bundle_flow(s, 1.5, opt);
  CHECK(run.final_state.h == s.h);
  CHECK(run.records.back().max_harmonic_residual < run.records.front().max_harmonic_residual);
}

TEST_CASE("serial and OpenMP backends agree bit for bit") {
  for (int N = 1; N <= 4; ++N) {
    const BundleState s = fourier(N, 40, 10 + static_cast<std::uint64_t>(N));
    BundleFlowOptions a, b;
    b.backend = Backend::OpenMP;
    const BundleRun ra = bundle_flow(s, 1.2, a), rb = bundle_flow(s, 1.2, b);
    CHECK(std::memcmp(ra.final_state.G.data(), rb.final_state.G.data(), ra.final_state.G.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(ra.final_state.h.data(), rb.final_state.h.data(), ra.final_state.h.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("seeds are deterministic") {
  const BundleState a = fourier(2, 32, 42), b = fourier(2, 32, 42), c = fourier(2, 32, 43);
  CHECK(a.G == b.G);
  CHECK(a.h == b.h);
  CHECK(a.G != c.G);
}

TEST_CASE("bundle data validation") {
  CHECK_THROWS_AS(make_bundle_state(2, 4, rho2(), 1.0, BundleSeed{}), ConfigError);
  CHECK_THROWS_AS(make_bundle_state(5, 32, Eigen::MatrixXd::Identity(5, 5), 1.0, BundleSeed{}), ConfigError);
  Eigen::MatrixXd rot(2, 2);
  rot << 0.0, -1.0, 1.0, 0.0;
  BundleSeed geo;
  geo.kind = SeedKind::Geodesic;
  CHECK_THROWS(make_bundle_state(2, 32, rot, 1.0, geo));
  CHECK_THROWS_AS(parse_seed_kind("spiral"), ConfigError);
  BundleState s = geodesic(16);
  s.h[3] = -1.0;
  CHECK_THROWS_AS(s.validate(), ValidationError);
}

TEST_CASE("bundle Ricci matches the coordinate oracle of the total space") {
  const BundleSampler sampler = curved_jet;
  for (double alpha : {0.2, 1.1, 2.5}) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(3);
    p(0) = alpha;
    OracleOptions opt;
    opt.step = 1e-2;
    opt.richardson = true;
    const Eigen::MatrixXd oracle =
        coordinate_ricci_oracle([&](const Eigen::VectorXd& q) { return total_space_metric(sampler, q); }, p, opt);
    const BundleJet jet = curved_jet(alpha);
    const BundleCurvature c = bundle_curvature(jet);
    const Eigen::MatrixXd comp = bundle_ricci_from_components(jet);
    CHECK(c.ricci_base == doctest::Approx(oracle(0, 0)).epsilon(1e-6));
    CHECK((c.ricci_fiber - oracle.bottomRightCorner(2, 2)).cwiseAbs().maxCoeff() < 1e-6);
    CHECK((comp - oracle).cwiseAbs().maxCoeff() < 1e-6);
    const double trace = (jet.G.inverse() * c.ricci_fiber).trace();
    CHECK(c.fiber_trace == doctest::Approx(trace));
  }
}

TEST_CASE("symmetric space helpers") {
  Eigen::MatrixXd X(3, 3);
  X << 0.2, 0.1, 0.0, 0.1, -0.5, 0.3, 0.0, 0.3, 0.3;
  const Eigen::MatrixXd G = sym_space_exp(X, 1.5);
  CHECK(G.determinant() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((spd_log(G) - 1.5 * X).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((spd_power(G, 0.5) * spd_power(G, 0.5) - G).cwiseAbs().maxCoeff() < 1e-13);
  Eigen::MatrixXd bad = X;
  bad(0, 0) += 1.0;
  CHECK_THROWS_AS(sym_space_exp(bad), ValidationError);
  // the geodesic speed of exp(sX) is |X|^2
  CHECK(sym_space_metric(G, G * X) == doctest::Approx((X * X).trace()));
}
