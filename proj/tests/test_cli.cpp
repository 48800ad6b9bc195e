#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "homflow/commands.hpp"
#include "homflow/config.hpp"
#include "homflow/csv.hpp"
#include "homflow/errors.hpp"

using namespace homflow;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"homflow"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("help and version exit cleanly") {
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"flow", "--help"}).out.find("--samples-per-decade") != std::string::npos);
  CHECK(cli({"--version"}).code == 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"bogus"}).code == 2);
  CHECK(cli({"flow", "--class", "sol3", "--nope", "1"}).code == 2);
  CHECK(cli({"flow", "--class", "sol3", "--t0", "abc"}).code == 2);
  CHECK(cli({"flow", "--class", "sol3", "--t0", "2", "--t1", "1"}).code == 2);
  CHECK(cli({"flow", "--class", "sol3", "--init", "1,2"}).code == 2);
  CHECK(cli({"flow", "--class", "nope"}).code == 2);
  CHECK(cli({"bundle-flow", "--grid", "4"}).code == 2);
  CHECK(cli({"bundle-flow", "--holonomy", "1,2;3"}).code == 2);
  CHECK(cli({"closed-form", "--class", "sl2r"}).code == 2);
}

TEST_CASE("extinct classes are excluded") {
  for (const char* id : {"s3", "S2", "s2xr", "s4", "cp2"}) {
    const Result r = cli({"flow", "--class", id});
    CHECK(r.code == 2);
    CHECK(r.err.find("finite extinction") != std::string::npos);
  }
}

TEST_CASE("I/O failures exit with 3") {
  CHECK(cli({"flow", "--class", "nil3", "--t1", "2", "--out", "/nonexistent/dir/x.csv"}).code == 3);
  CHECK(cli({"fit", "--in", "/nonexistent/in.csv", "--column", "c1"}).code == 3);
  CHECK(cli({"flow", "--config", "/nonexistent/config.json"}).code == 3);
}

TEST_CASE("numerical failure exits with 1 and keeps partial output") {
  const Result r = cli({"flow", "--class", "a10", "--t1", "10"});
  CHECK(r.code == 1);
  CHECK(r.err.find("blow-up") != std::string::npos);
  std::istringstream is(r.out);
  CHECK(parse_csv(is).rows.size() > 10);
}

TEST_CASE("flow CSV has the documented columns and round-trips") {
  const Result r = cli({"flow", "--class", "nil3", "--init", "1,1,1", "--t0", "1e-3", "--t1", "10"});
  REQUIRE(r.code == 0);
  std::istringstream is(r.out);
  const CsvTable t = parse_csv(is);
  CHECK(t.header == std::vector<std::string>{"t", "c1", "c2", "c3", "max_abs_K", "t_max_abs_K"});
  CHECK(t.rows.size() == 81);
  std::ostringstream again;
  write_csv(again, t);
  CHECK(again.str() == r.out);
}

TEST_CASE("format_double round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5e-17}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("config file values are overridden by flags") {
  const auto path = temp("homflow_test_config.json");
  {
    std::ofstream f(path);
    f << R"({"class": "sol3", "init": [2, 1, 3], "t0": 0.5, "t1": 4, "samples_per_decade": 3})";
  }
  const ParsedArgs p = parse_args(5, std::vector<const char*>{"homflow", "flow", "--config", path.c_str(), "--t1=8"}.data());
  REQUIRE_FALSE(p.exit_code);
  CHECK(p.config.class_id == "sol3");
  CHECK(p.config.t0 == 0.5);
  CHECK(p.config.t1 == 8.0);
  CHECK(*p.config.init == std::vector<double>{2.0, 1.0, 3.0});
  CHECK(p.config.samples_per_decade == 3);
  std::filesystem::remove(path);
}

TEST_CASE("unknown config keys are rejected") {
  const auto path = temp("homflow_test_bad.json");
  {
    std::ofstream f(path);
    f << R"({"class": "sol3", "tmax": 4})";
  }
  const Result r = cli({"flow", "--config", path.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("tmax") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("holonomy parsing") {
  RunConfig c;
  apply_config_value(c, "holonomy", "\"2,1;1,1\"");
  CHECK(c.holonomy == std::vector<double>{2.0, 1.0, 1.0, 1.0});
  apply_config_value(c, "holonomy", "[[1,0],[0,1]]");
  CHECK(c.holonomy == std::vector<double>{1.0, 0.0, 0.0, 1.0});
}

TEST_CASE("catalog emits one JSON document per class") {
  const Result r = cli({"catalog"});
  REQUIRE(r.code == 0);
  std::istringstream is(r.out);
  std::string line;
  int n = 0;
  while (std::getline(is, line)) {
    const auto j = nlohmann::json::parse(line);
    CHECK(j.contains("id"));
    CHECK(j.contains("structure_constants"));
    CHECK(j.contains("default_init"));
    CHECK(j.contains("soliton"));
    CHECK(j.contains("asymptotics"));
    ++n;
  }
  CHECK(n == static_cast<int>(catalog_tags().size()));
  const auto sol = nlohmann::json::parse(cli({"catalog", "--class", "sol3"}).out);
  CHECK(sol["structure_constants"][0][1][2] == 1.0);
}

TEST_CASE("curvature report") {
  const Result r = cli({"curvature", "--class", "nil3", "--init", "1,1,1"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["sectional"][1][2].get<double>() == doctest::Approx(-0.75));
  CHECK(j["max_abs_sectional"].get<double>() == doctest::Approx(0.75));
}

TEST_CASE("soliton check of SOL3") {
  const Result r = cli({"soliton-check", "--class", "sol3", "--t-list", "0.1,1,10"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["max_norm"].get<double>() <= 1e-12);
  CHECK(j["reports"].size() == 3);
}

TEST_CASE("rescale-limit deviations decrease down the list") {
  const Result r = cli({"rescale-limit", "--class", "sol3", "--init", "2,1,3", "--s-list", "1e3,1e4,1e5,1e6"});
  REQUIRE(r.code == 0);
  std::istringstream is(r.out);
  const CsvTable t = parse_csv(is);
  REQUIRE(t.rows.size() == 4);
  for (std::size_t k = 1; k < 4; ++k) CHECK(t.rows[k][1] < t.rows[k - 1][1]);
  CHECK(t.rows.back()[1] < 0.01);
}

TEST_CASE("fit reads a flow CSV") {
  const auto path = temp("homflow_test_flow.csv");
  REQUIRE(cli({"flow", "--class", "sol3", "--init", "2,1,3", "--t0", "1", "--t1", "1e5", "--out", path.string()}).code ==
          0);
  const Result r = cli({"fit", "--in", path.string(), "--column", "c2", "--window", "0.2"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["exponent"].get<double>() == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(cli({"fit", "--in", path.string(), "--column", "nope"}).code == 2);
  std::filesystem::remove(path);
}

TEST_CASE("closed-form table") {
  const Result r = cli({"closed-form", "--class", "nil3", "--init", "1,1,1", "--t-list", "0,1,2"});
  REQUIRE(r.code == 0);
  std::istringstream is(r.out);
  const CsvTable t = parse_csv(is);
  CHECK(t.rows[1][1] == doctest::Approx(std::pow(4.0, -1.0 / 3.0)));
}

TEST_CASE("bundle-flow CSV columns") {
  const Result r = cli({"bundle-flow", "--grid", "32", "--t1", "3", "--seed", "geodesic"});
  REQUIRE(r.code == 0);
  std::istringstream is(r.out);
  const CsvTable t = parse_csv(is);
  CHECK(t.header == std::vector<std::string>{"t", "energy", "v_tilde", "max_harmonic_residual", "max_einstein_residual",
                                             "det_drift"});
  CHECK(t.rows.front()[0] == 1.0);
  CHECK(t.rows.back()[0] == 3.0);
}

TEST_CASE("selftest subset") {
  const Result r = cli({"selftest", "--criteria", "1,2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("[PASS] 1") != std::string::npos);
  CHECK(r.out.find("[PASS] 2") != std::string::npos);
}
