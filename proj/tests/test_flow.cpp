#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "homflow/errors.hpp"
#include "homflow/flow.hpp"
#include "homflow/ode.hpp"

using namespace homflow;

TEST_CASE("dopri5 reproduces the exponential with dense output") {
  const OdeRhs f = [](double, const std::vector<double>& y, std::vector<double>& d) { d[0] = y[0]; };
  OdeOptions opt;
  opt.rtol = 1e-11;
  opt.atol = 1e-14;
  const OdeResult r = integrate_dopri5(f, 0.0, {1.0}, 5.0, opt);
  REQUIRE(r.reason == StopReason::Completed);
  CHECK(r.dense->t_max() == 5.0);
  for (double t : {0.0, 0.37, 1.5, 2.999, 5.0}) CHECK((*r.dense)(t)[0] == doctest::Approx(std::exp(t)).epsilon(1e-9));
}

TEST_CASE("dopri5 handles an oscillator over many periods") {
  // y = (2 + sin t, 2 + cos t) stays positive, as flow coefficients do
  const OdeRhs f = [](double, const std::vector<double>& y, std::vector<double>& d) {
    d[0] = y[1] - 2.0;
    d[1] = 2.0 - y[0];
  };
  OdeOptions opt;
  opt.rtol = 1e-10;
  opt.atol = 1e-12;
  const double T = 20.0 * std::numbers::pi;
  const OdeResult r = integrate_dopri5(f, 0.0, {2.0, 3.0}, T, opt);
  REQUIRE(r.reason == StopReason::Completed);
  const auto y = (*r.dense)(T);
  CHECK(y[0] == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(y[1] == doctest::Approx(3.0).epsilon(1e-7));
  // between steps the interpolant stays accurate
  CHECK((*r.dense)(1.234)[0] == doctest::Approx(2.0 + std::sin(1.234)).epsilon(1e-8));
}

TEST_CASE("finite-time blow-up is reported") {
  const OdeRhs f = [](double, const std::vector<double>& y, std::vector<double>& d) { d[0] = y[0] * y[0]; };
  const OdeResult r = integrate_dopri5(f, 0.0, {1.0}, 2.0, OdeOptions{});
  CHECK(r.reason == StopReason::BlowUp);
  CHECK(r.dense->t_max() < 1.0);
  CHECK(r.dense->t_max() > 0.99);
}

TEST_CASE("a component reaching zero is degenerate") {
  const OdeRhs f = [](double, const std::vector<double>&, std::vector<double>& d) { d[0] = -1.0; };
  const OdeResult r = integrate_dopri5(f, 0.0, {1.0}, 2.0, OdeOptions{});
  CHECK(r.reason == StopReason::Degenerate);
  CHECK(to_string(r.reason) == "degenerate");
}

TEST_CASE("domain errors in stages shrink the step") {
  // sqrt is undefined below zero; the solution y = (1 - t/2)^2 touches zero at t = 2.
  const OdeRhs f = [](double, const std::vector<double>& y, std::vector<double>& d) {
    if (y[0] < 0.0) throw DomainError("negative");
    d[0] = -std::sqrt(y[0]);
  };
  const OdeResult r = integrate_dopri5(f, 0.0, {1.0}, 1.5, OdeOptions{});
  CHECK(r.reason == StopReason::Completed);
  CHECK((*r.dense)(1.5)[0] == doctest::Approx(0.0625).epsilon(1e-7));
}

TEST_CASE("NIL3 flow matches the closed form") {
  const GeometryClass c = load_catalog("NIL3");
  FlowProblem p{c, {2.0, 0.5, 3.0}, 1e-2, 50.0, 1e-10, 1e-13, 10};
  const Trajectory tr = integrate(p);
  REQUIRE(tr.completed());
  for (const Sample& s : tr.samples) {
    const ClosedForm cf = closed_form(c, p.init, s.t, p.t0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(s.coeffs[i] == doctest::Approx(cf.values[i]).epsilon(1e-8));
  }
}

TEST_CASE("closed form of NIL3 at t = 0 is the data and obeys the ODE") {
  const GeometryClass c = load_catalog("NIL3");
  const CoeffVector x0{1.5, 2.0, 0.7};
  CHECK(closed_form(c, x0, 0.0).values == x0);
  // finite-difference derivative of the closed form versus the right-hand side
  const double t = 0.8, e = 1e-5;
  const auto up = closed_form(c, x0, t + e).values, dn = closed_form(c, x0, t - e).values;
  const auto v = rhs(c, closed_form(c, x0, t).values);
  for (int i = 0; i < 3; ++i) CHECK((up[i] - dn[i]) / (2 * e) == doctest::Approx(v[i]).epsilon(1e-8));
}

TEST_CASE("A7 closed form gives only D") {
  const ClosedForm cf = closed_form(load_catalog("A7"), {1.0, 1.0, 1.0, 1.0}, 2.0);
  CHECK_FALSE(cf.exact[0]);
  CHECK(std::isnan(cf.values[0]));
  CHECK(cf.exact[3]);
  CHECK(cf.values[3] == doctest::Approx(std::cbrt(1.0 / 7.0)));
}

TEST_CASE("closed form is unsupported where none is known") {
  CHECK_FALSE(has_closed_form(ClassId::SL2R));
  CHECK_THROWS_AS(closed_form(load_catalog("SL2R"), {1.0, 1.0, 1.0}, 1.0), UnsupportedError);
}

TEST_CASE("Einstein class expands linearly") {
  CatalogParams par;
  par.c = 0.5;
  const GeometryClass h3 = load_catalog("H3", par);
  FlowProblem p{h3, {2.0}, 1.0, 10.0, 1e-10, 1e-12, 5};
  const Trajectory tr = integrate(p);
  CHECK(tr.samples.back().coeffs[0] == doctest::Approx(2.0 + 2.0 * 0.5 * 9.0));
}

TEST_CASE("finite extinction stops with a reason and partial samples") {
  const GeometryClass c = load_catalog("A10");
  FlowProblem p{c, c.default_init, 1e-3, 10.0, 1e-9, 1e-12, 20};
  const Trajectory tr = integrate(p);
  CHECK_FALSE(tr.completed());
  CHECK_FALSE(tr.samples.empty());
  CHECK(tr.samples.back().t < 10.0);
  for (const Sample& s : tr.samples)
    for (double v : s.coeffs) CHECK(v > 0.0);
}

TEST_CASE("problem validation") {
  const GeometryClass c = load_catalog("SOL3");
  CHECK_THROWS_AS(integrate(FlowProblem{c, {1.0, 1.0}, 1.0, 2.0}), ValidationError);
  CHECK_THROWS_AS(integrate(FlowProblem{c, {1.0, -1.0, 1.0}, 1.0, 2.0}), ValidationError);
  CHECK_THROWS_AS(integrate(FlowProblem{c, {1.0, 1.0, 1.0}, 2.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(rhs(c, {1.0, 0.0, 1.0}), DomainError);
}

TEST_CASE("log grid is inclusive and geometric") {
  const auto g = log_grid(1e-2, 1e2, 5);
  CHECK(g.front() == 1e-2);
  CHECK(g.back() == 1e2);
  CHECK(g.size() == 21);
  CHECK(g[5] == doctest::Approx(1e-1));
}

TEST_CASE("type-III quantity of the NIL3 flow") {
  const GeometryClass c = load_catalog("NIL3");
  FlowProblem p{c, {1.0, 1.0, 1.0}, 1.0, 1e4, 1e-10, 1e-12, 10};
  const Trajectory tr = integrate(p);
  CHECK(tr.samples.back().t_max_abs_k == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(type_iii_sup(tr) >= tr.samples.back().t_max_abs_k);
}
