#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "homflow/catalog.hpp"

namespace homflow {

struct RunConfig {
  std::string command;
  std::string class_id;
  CatalogParams params;
  std::optional<CoeffVector> init;

  // flow, closed-form, rescale-limit
  double t0 = 1e-3;
  double t1 = 100.0;
  double rtol = 1e-9;
  double atol = 1e-12;
  int samples_per_decade = 20;
  std::vector<double> t_list = {1.0};
  std::vector<double> s_list = {1e3, 1e4, 1e5, 1e6};
  double window_lo = 1.0;
  double window_hi = 2.0;

  // fit
  std::string in_path;
  std::string column;
  std::string time_column = "t";
  double window = 0.25;
  std::optional<double> log_power;

  // bundle-flow
  int grid = 256;
  int fiber_dim = 2;
  std::vector<double> holonomy = {2.0, 1.0, 1.0, 1.0};  // row-major
  std::string seed_kind = "fourier";
  double amplitude = 0.1;
  int modes = 3;
  std::optional<double> h0;
  double h_margin = 0.05;
  double cfl = 0.4;
  int records_per_decade = 10;
  bool freeze_base = false;
  std::string backend = "serial";

  // selftest
  std::vector<int> criteria;  // empty means all
  std::string calibration_path;

  std::uint64_t rng_seed = 1;
  std::string out_path;

  /// Range checks; throws ConfigError.
  void validate() const;
};

/// Applies one key of a JSON config document (flag name with '-' replaced by '_').
/// Values may be JSON numbers/arrays or strings in command-line syntax.
/// Throws ConfigError for unknown keys and malformed values.
void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& json_value);

/// Reads a JSON config document; CLI flags are applied on top by parse_args.
void apply_config_file(RunConfig& cfg, const std::string& path);

struct ParsedArgs {
  RunConfig config;
  std::optional<int> exit_code;  // set when parsing already decided the outcome (help, errors)
  std::string message;
};

ParsedArgs parse_args(int argc, const char* const* argv);

/// "1,2,3" -> {1,2,3}; throws ConfigError.
std::vector<double> parse_number_list(const std::string& s);

}  // namespace homflow
