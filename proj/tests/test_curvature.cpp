#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "homflow/catalog.hpp"
#include "homflow/curvature.hpp"
#include "homflow/errors.hpp"
#include "homflow/tables.hpp"
#include "oracles.hpp"

using namespace homflow;

namespace {

const StructureConstants& lie(const GeometryClass& c) { return std::get<StructureConstants>(c.geometry.factors()[0].model); }

void check_against_chart(const char* id, const oracle::FrameField& frame, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const GeometryClass c = load_catalog(id);
  for (int k = 0; k < 5; ++k) {
    const auto d = oracle::random_diag(rng, 3);
    Eigen::VectorXd p(3);
    p << 0.3, -0.2, 0.4;
    const Eigen::MatrixXd expected = oracle::frame_ricci(frame, d, p);
    const Eigen::MatrixXd got = ricci(lie(c), FrameMetric::diagonal(d));
    CAPTURE(id);
    CHECK((got - expected).cwiseAbs().maxCoeff() <= 1e-7 * (1.0 + expected.cwiseAbs().maxCoeff()));
  }
}

}  // namespace

TEST_CASE("frame Ricci matches the coordinate oracle") {
  check_against_chart("NIL3", oracle::nil3_frame, 1);
  check_against_chart("SOL3", oracle::sol3_frame, 2);
  check_against_chart("ISOM_R2", oracle::isom_r2_frame, 3);
}

TEST_CASE("NIL3 sectional curvatures at the unit metric") {
  const GeometryClass c = load_catalog("NIL3");
  const Eigen::MatrixXd K = sectional(lie(c), FrameMetric::diagonal({1.0, 1.0, 1.0}));
  CHECK(K(0, 1) == doctest::Approx(0.25));
  CHECK(K(1, 2) == doctest::Approx(-0.75));
  CHECK(K(0, 2) == doctest::Approx(0.25));
}

TEST_CASE("hyperbolic plane chart has Ric = -g") {
  const MetricSampler g = [](const Eigen::VectorXd& p) {
    return Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2) / (p(1) * p(1)));
  };
  Eigen::VectorXd p(2);
  p << 0.2, 0.7;
  OracleOptions opt;
  opt.richardson = true;
  const Eigen::MatrixXd ric = coordinate_ricci_oracle(g, p, opt);
  CHECK((ric + g(p)).cwiseAbs().maxCoeff() < 1e-8);

  const GeometryClass h2 = load_catalog("H2");
  const Eigen::MatrixXd engine = ricci(h2.geometry, {3.0});
  CHECK(engine(0, 0) == doctest::Approx(-1.0));
  CHECK(engine(1, 1) == doctest::Approx(-1.0));
}

TEST_CASE("Euclidean chart metric has vanishing Ricci") {
  const MetricSampler g = [](const Eigen::VectorXd&) { return Eigen::MatrixXd(Eigen::MatrixXd::Identity(3, 3)); };
  CHECK(coordinate_ricci_oracle(g, Eigen::VectorXd::Zero(3)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("engine and transcribed tables agree") {
  std::mt19937_64 rng(7);
  for (const char* id : {"SOL3", "NIL3", "ISOM_R2", "SL2R"}) {
    const GeometryClass c = load_catalog(id);
    for (int k = 0; k < 20; ++k) {
      const auto x = oracle::random_diag(rng, 3);
      const Eigen::MatrixXd K = sectional(lie(c), FrameMetric::diagonal(x));
      const auto t = *transcribed_sectional(c.kind, x);
      CHECK(K(0, 1) == doctest::Approx(t.k12).epsilon(1e-12));
      CHECK(K(1, 2) == doctest::Approx(t.k23).epsilon(1e-12));
      CHECK(K(2, 0) == doctest::Approx(t.k31).epsilon(1e-12));
    }
  }
}

TEST_CASE("Bianchi identity and symmetries of the Riemann tensor") {
  std::mt19937_64 rng(11);
  for (const char* id : {"A2", "A6", "A7", "A8", "SL2R"}) {
    const GeometryClass c = load_catalog(id);
    const FrameMetric m = FrameMetric::diagonal(oracle::random_diag(rng, c.geometry.dim()));
    const CurvatureReport r = curvature_report(lie(c), m);
    CHECK(bianchi_residual(r.riemann) < 1e-12);
    CHECK((r.ricci - r.ricci.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("non-diagonal metric: Ricci is invariant under relabelling") {
  const GeometryClass c = load_catalog("SL2R");
  Eigen::MatrixXd g(3, 3);
  g << 2.0, 0.3, 0.1, 0.3, 1.0, -0.2, 0.1, -0.2, 1.5;
  const std::vector<int> perm{1, 2, 0};
  Eigen::MatrixXd gp(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) gp(a, b) = g(perm[a], perm[b]);
  const Eigen::MatrixXd r = ricci(lie(c), FrameMetric(g));
  const Eigen::MatrixXd rp = ricci(lie(c).permuted(perm), FrameMetric(gp));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) CHECK(rp(a, b) == doctest::Approx(r(perm[a], perm[b])).epsilon(1e-12));
}

TEST_CASE("frame metric validation") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(FrameMetric{bad}, ValidationError);
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.1, 0.0, 1.0;
  CHECK_THROWS_AS(FrameMetric{asym}, ValidationError);
}

TEST_CASE("product curvature is block diagonal") {
  const GeometryClass p = load_catalog("NIL3*H2");
  const CurvatureReport r = curvature_report(p.geometry, {1.0, 1.0, 1.0, 2.0});
  CHECK(r.ricci(0, 3) == 0.0);
  CHECK(r.ricci(3, 3) == doctest::Approx(-1.0));
  CHECK(r.sectional(0, 4) == 0.0);
}
