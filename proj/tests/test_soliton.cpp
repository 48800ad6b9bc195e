#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "homflow/errors.hpp"
#include "homflow/flow.hpp"
#include "homflow/soliton.hpp"

using namespace homflow;

TEST_CASE("catalog solitons solve the soliton equation") {
  for (const char* id : {"SOL3", "NIL3", "A2", "A3", "A5", "A6", "A7", "A8", "SL2R", "H2", "H3", "H4", "CH2", "R3",
                         "A1", "ISOM_R2", "A9"}) {
    const GeometryClass c = load_catalog(id);
    CAPTURE(id);
    for (double t : {1e-2, 0.5, 1.0, 30.0, 1e4}) {
      CHECK(soliton_residual(*c.soliton, t).max_norm <= 1e-12);
      CHECK(self_similarity_defect(*c.soliton, t) <= 1e-12);
      CHECK(flow_consistency_defect(*c.soliton, t) <= 1e-12);
    }
  }
}

TEST_CASE("products of solitons are solitons") {
  for (const char* id : {"SOL3*NIL3", "H2*R1", "A6*H3", "NIL3*NIL3"}) {
    const GeometryClass c = load_catalog(id);
    CAPTURE(id);
    CHECK(soliton_residual(*c.soliton, 3.0).max_norm <= 1e-12);
  }
}

TEST_CASE("perturbed coefficients leave a residual") {
  const GeometryClass c = load_catalog("SOL3");
  CoeffVector x = c.soliton->coeffs(2.0);
  x[1] *= 1.01;
  CHECK(soliton_residual(*c.soliton, x, 2.0).max_norm > 1e-4);
}

TEST_CASE("soliton coefficients are a Ricci flow") {
  // an independent integration from the soliton at t = 1 stays on the soliton
  const GeometryClass c = load_catalog("A6");
  FlowProblem p{c, c.soliton->coeffs(1.0), 1.0, 100.0, 1e-11, 1e-14, 5};
  const Trajectory tr = integrate(p);
  for (const Sample& s : tr.samples) {
    const auto ref = c.soliton->coeffs(s.t);
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(s.coeffs[i] == doctest::Approx(ref[i]).epsilon(1e-8));
  }
}

TEST_CASE("Lie derivative of a scaling field") {
  const Eigen::MatrixXd L = lie_derivative_diag({0.5, 0.0, -1.0}, FrameMetric::diagonal({2.0, 3.0, 4.0}), 2.0);
  CHECK(L(0, 0) == doctest::Approx(-1.0));
  CHECK(L(1, 1) == 0.0);
  CHECK(L(2, 2) == doctest::Approx(4.0));
  Eigen::MatrixXd g(2, 2);
  g << 1.0, 0.1, 0.1, 1.0;
  CHECK_THROWS_AS(lie_derivative_diag({0.0, 0.0}, FrameMetric(g), 1.0), UnsupportedError);
}

TEST_CASE("classes without a soliton") {
  CHECK_THROWS_AS(soliton_catalog(load_catalog("A10")), UnsupportedError);
}
