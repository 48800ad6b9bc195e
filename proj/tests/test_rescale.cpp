#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "homflow/errors.hpp"
#include "homflow/flow.hpp"
#include "homflow/rescale.hpp"
#include "homflow/soliton.hpp"

using namespace homflow;

namespace {

Trajectory flow(const char* id, double t1) {
  const GeometryClass c = load_catalog(id);
  return integrate(FlowProblem{c, c.default_init, 1.0, t1, 1e-11, 1e-14, 10});
}

}  // namespace

TEST_CASE("rescaled view follows its definition") {
  const Trajectory tr = flow("SOL3", 1e3);
  const NormalizerSpec n{{1.0, 0.0, 1.0}, {0.5, 2.0, 3.0}};
  const RescaledSolution v(tr.dense, 10.0, n);
  const auto raw = (*tr.dense)(25.0);
  const auto got = v(2.5);
  CHECK(got[0] == doctest::Approx(0.5 * raw[0]));
  CHECK(got[1] == doctest::Approx(2.0 * raw[1] / 10.0));
  CHECK(got[2] == doctest::Approx(3.0 * raw[2]));
  CHECK(v.t_max() == doctest::Approx(100.0));
}

TEST_CASE("nested rescaling equals one rescaling with composed normalizers") {
  const Trajectory tr = flow("A6", 1e4);
  const NormalizerSpec n1 = load_catalog("A6").normalizer({1.0, 1.0, 1.0, 1.0});
  const NormalizerSpec n2 = load_catalog("A6").normalizer({2.0, 0.5, 1.0, 3.0});
  const Trajectory a = rescaled_trajectory(rescaled_trajectory(tr, 7.0, n1, 1.0, 100.0), 9.0, n2, 1.0, 10.0);
  const Trajectory b = rescaled_trajectory(tr, 63.0, compose(n1, 7.0, n2), 1.0, 10.0);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t k = 0; k < a.samples.size(); ++k)
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(a.samples[k].coeffs[i] == doctest::Approx(b.samples[k].coeffs[i]).epsilon(1e-12));
}

TEST_CASE("rescaled curvature scales with s") {
  const Trajectory tr = flow("NIL3", 1e3);
  const Trajectory r = rescaled_trajectory(tr, 10.0, identity_normalizer(3), 1.0, 10.0, 5);
  // identity normalizer gives c(st)/s, whose curvature is s K(st)
  const auto raw = (*tr.dense)(10.0 * r.samples.front().t);
  const double k_raw = max_abs_sectional(tr.geometry, raw);
  CHECK(r.samples.front().max_abs_k == doctest::Approx(10.0 * k_raw));
}

TEST_CASE("window outside the flow is a range error") {
  const Trajectory tr = flow("NIL3", 100.0);
  CHECK_THROWS_AS(rescaled_trajectory(tr, 1e3, identity_normalizer(3), 1.0, 2.0), RangeError);
}

TEST_CASE("SOL3 normalized flow approaches the soliton") {
  const GeometryClass c = load_catalog("SOL3");
  const Trajectory tr = flow("SOL3", 2.1e5);
  const NormalizerSpec n = c.normalizer(c.default_init);
  double prev = 1.0;
  for (double s : {1e2, 1e3, 1e4, 1e5}) {
    const double d = soliton_deviation(rescaled_trajectory(tr, s, n, 1.0, 2.0), *c.soliton);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("fit recovers exact power laws on irregular grids") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> lt(0.0, 5.0);
  std::vector<std::pair<double, double>> data;
  for (int i = 0; i < 100; ++i) {
    const double t = std::pow(10.0, lt(rng));
    data.emplace_back(t, 0.3 * std::pow(t, -1.0 / 3.0));
  }
  std::sort(data.begin(), data.end());
  FitOptions opt;
  opt.tail_fraction = 1.0;
  const FitResult f = fit_power_law(data, opt);
  CHECK(f.exponent == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(f.coefficient == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(f.log_power == 0.0);
  CHECK(f.residual < 1e-12);
}

TEST_CASE("fit selects a log correction when it explains the data") {
  std::vector<std::pair<double, double>> data;
  for (double t : log_grid(10.0, 1e6, 20)) data.emplace_back(t, 2.0 * std::sqrt(std::log(t)));
  const FitResult f = fit_power_law(data);
  CHECK(f.model == FitModel::LogCorrected);
  CHECK(f.log_power == 0.5);
  CHECK(f.exponent == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
  CHECK(f.coefficient == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("fit input validation") {
  std::vector<std::pair<double, double>> few{{1.0, 1.0}, {2.0, 2.0}};
  CHECK_THROWS_AS(fit_power_law(few), ValidationError);
  std::vector<std::pair<double, double>> neg;
  for (double t : log_grid(1.0, 100.0, 20)) neg.emplace_back(t, -t);
  CHECK_THROWS_AS(fit_power_law(neg), DomainError);
}

TEST_CASE("tail fraction for the last decade") {
  CHECK(tail_fraction_for_decades(1.0, 1e6, 1.0) == doctest::Approx(1.0 / 6.0));
  CHECK(tail_fraction_for_decades(1.0, 10.0, 3.0) == doctest::Approx(1.0));
}

TEST_CASE("asymptotics of SOL3") {
  const auto rep = asymptotics_check(load_catalog("SOL3"), {2.0, 1.0, 3.0}, 1e5);
  CHECK(rep.lines[1].fit.exponent == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(rep.lines[1].fit.coefficient == doctest::Approx(4.0).epsilon(1e-2));
  CHECK(rep.lines[0].final_value == doctest::Approx(std::sqrt(6.0)).epsilon(1e-6));
}
