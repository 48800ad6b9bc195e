#include "homflow/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "homflow/errors.hpp"

namespace homflow {
namespace {

using nlohmann::json;

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
  return s;
}

double parse_number(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v))
    throw ConfigError(key + ": '" + raw + "' is not a finite number");
  return v;
}

double as_double(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_number(v.get<std::string>(), key);
  throw ConfigError(key + ": expected a number");
}

int as_int(const json& v, const std::string& key) {
  const double d = as_double(v, key);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw ConfigError(key + ": expected an integer");
  return static_cast<int>(d);
}

std::string as_string(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  throw ConfigError(key + ": expected a string");
}

bool as_bool(const json& v, const std::string& key) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
  }
  throw ConfigError(key + ": expected true or false");
}

std::vector<double> as_list(const json& v, const std::string& key) {
  if (v.is_string()) {
    try {
      return parse_number_list(v.get<std::string>());
    } catch (const ConfigError& e) {
      throw ConfigError(key + ": " + e.what());
    }
  }
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& x : v) {
      if (x.is_array()) {
        for (const auto& y : x) out.push_back(as_double(y, key));
      } else {
        out.push_back(as_double(x, key));
      }
    }
    return out;
  }
  if (v.is_number()) return {v.get<double>()};
  throw ConfigError(key + ": expected a list of numbers");
}

std::vector<double> parse_matrix(const json& v, const std::string& key) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    std::replace(s.begin(), s.end(), ';', ',');
    return as_list(json(s), key);
  }
  return as_list(v, key);
}

using Setter = void (*)(RunConfig&, const json&, const std::string&);

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> m = {
      {"command", [](RunConfig& c, const json& v, const std::string& k) { c.command = as_string(v, k); }},
      {"class", [](RunConfig& c, const json& v, const std::string& k) { c.class_id = as_string(v, k); }},
      {"k", [](RunConfig& c, const json& v, const std::string& k) { c.params.k = as_double(v, k); }},
      {"c", [](RunConfig& c, const json& v, const std::string& k) { c.params.c = as_double(v, k); }},
      {"init", [](RunConfig& c, const json& v, const std::string& k) { c.init = as_list(v, k); }},
      {"t0", [](RunConfig& c, const json& v, const std::string& k) { c.t0 = as_double(v, k); }},
      {"t1", [](RunConfig& c, const json& v, const std::string& k) { c.t1 = as_double(v, k); }},
      {"rtol", [](RunConfig& c, const json& v, const std::string& k) { c.rtol = as_double(v, k); }},
      {"atol", [](RunConfig& c, const json& v, const std::string& k) { c.atol = as_double(v, k); }},
      {"samples_per_decade",
       [](RunConfig& c, const json& v, const std::string& k) { c.samples_per_decade = as_int(v, k); }},
      {"t_list", [](RunConfig& c, const json& v, const std::string& k) { c.t_list = as_list(v, k); }},
      {"s_list", [](RunConfig& c, const json& v, const std::string& k) { c.s_list = as_list(v, k); }},
      {"window_lo", [](RunConfig& c, const json& v, const std::string& k) { c.window_lo = as_double(v, k); }},
      {"window_hi", [](RunConfig& c, const json& v, const std::string& k) { c.window_hi = as_double(v, k); }},
      {"in", [](RunConfig& c, const json& v, const std::string& k) { c.in_path = as_string(v, k); }},
      {"column", [](RunConfig& c, const json& v, const std::string& k) { c.column = as_string(v, k); }},
      {"time_column", [](RunConfig& c, const json& v, const std::string& k) { c.time_column = as_string(v, k); }},
      {"window", [](RunConfig& c, const json& v, const std::string& k) { c.window = as_double(v, k); }},
      {"log_power", [](RunConfig& c, const json& v, const std::string& k) { c.log_power = as_double(v, k); }},
      {"grid", [](RunConfig& c, const json& v, const std::string& k) { c.grid = as_int(v, k); }},
      {"fiber_dim", [](RunConfig& c, const json& v, const std::string& k) { c.fiber_dim = as_int(v, k); }},
      {"holonomy", [](RunConfig& c, const json& v, const std::string& k) { c.holonomy = parse_matrix(v, k); }},
      {"seed", [](RunConfig& c, const json& v, const std::string& k) { c.seed_kind = as_string(v, k); }},
      {"amplitude", [](RunConfig& c, const json& v, const std::string& k) { c.amplitude = as_double(v, k); }},
      {"modes", [](RunConfig& c, const json& v, const std::string& k) { c.modes = as_int(v, k); }},
      {"h0", [](RunConfig& c, const json& v, const std::string& k) { c.h0 = as_double(v, k); }},
      {"h_margin", [](RunConfig& c, const json& v, const std::string& k) { c.h_margin = as_double(v, k); }},
      {"cfl", [](RunConfig& c, const json& v, const std::string& k) { c.cfl = as_double(v, k); }},
      {"records_per_decade",
       [](RunConfig& c, const json& v, const std::string& k) { c.records_per_decade = as_int(v, k); }},
      {"freeze_base", [](RunConfig& c, const json& v, const std::string& k) { c.freeze_base = as_bool(v, k); }},
      {"backend", [](RunConfig& c, const json& v, const std::string& k) { c.backend = as_string(v, k); }},
      {"criteria",
       [](RunConfig& c, const json& v, const std::string& k) {
         c.criteria.clear();
         for (double d : as_list(v, k)) {
           if (d != std::floor(d)) throw ConfigError(k + ": criteria are integers");
           c.criteria.push_back(static_cast<int>(d));
         }
       }},
      {"calibration",
       [](RunConfig& c, const json& v, const std::string& k) { c.calibration_path = as_string(v, k); }},
      {"rng_seed",
       [](RunConfig& c, const json& v, const std::string& k) {
         const double d = as_double(v, k);
         if (d < 0 || d != std::floor(d) || d > 9.007199254740992e15) throw ConfigError(k + ": expected a nonnegative integer");
         c.rng_seed = static_cast<std::uint64_t>(d);
       }},
      {"out", [](RunConfig& c, const json& v, const std::string& k) { c.out_path = as_string(v, k); }},
  };
  return m;
}

void apply(RunConfig& cfg, const std::string& key, const json& value) {
  const auto& m = setters();
  auto it = m.find(key);
  if (it == m.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(cfg, value, key);
}

std::string key_of(const std::string& flag) {
  std::string k = flag;
  while (!k.empty() && k.front() == '-') k.erase(k.begin());
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, "list"));
  if (out.empty()) throw ConfigError("empty number list");
  return out;
}

void apply_config_value(RunConfig& cfg, const std::string& key, const std::string& json_value) {
  json v;
  try {
    v = json::parse(json_value);
  } catch (const json::parse_error&) {
    v = json_value;  // bare command-line token
  }
  apply(cfg, key, v);
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config '" + path + "'");
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config '" + path + "' must be a JSON object");
  for (const auto& [key, value] : doc.items()) apply(cfg, key, value);
}

void RunConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be positive");
  };
  if (command == "closed-form") {
    if (!(t0 >= 0.0)) throw ConfigError("t0 must be nonnegative");
    for (double t : t_list)
      if (!(t >= t0)) throw ConfigError("t-list entries must not precede t0");
  } else {
    positive(t0, "t0");
    if (!(t1 > t0)) throw ConfigError("t1 must exceed t0");
    for (double t : t_list) positive(t, "t-list entries");
  }
  if (!(rtol > 0.0 && rtol < 1.0)) throw ConfigError("rtol must lie in (0, 1)");
  positive(atol, "atol");
  if (samples_per_decade < 1 || samples_per_decade > 10000) throw ConfigError("samples-per-decade must be in [1, 10000]");
  if (init)
    for (double v : *init) positive(v, "init entries");
  for (double s : s_list) positive(s, "s-list entries");
  positive(window_lo, "window-lo");
  if (!(window_hi > window_lo)) throw ConfigError("window-hi must exceed window-lo");
  if (!(window > 0.0 && window <= 1.0)) throw ConfigError("window must lie in (0, 1]");
  if (grid < 8 || grid > 1 << 20) throw ConfigError("grid must be in [8, 1048576]");
  if (fiber_dim < 1 || fiber_dim > 4) throw ConfigError("fiber-dim must be in [1, 4]");
  if (static_cast<int>(holonomy.size()) != fiber_dim * fiber_dim)
    throw ConfigError("holonomy needs fiber-dim^2 entries");
  if (seed_kind != "constant" && seed_kind != "geodesic" && seed_kind != "fourier")
    throw ConfigError("seed must be constant, geodesic or fourier");
  if (amplitude < 0.0) throw ConfigError("amplitude must be nonnegative");
  if (modes < 1 || modes > 64) throw ConfigError("modes must be in [1, 64]");
  if (h0) positive(*h0, "h0");
  if (h_margin < 0.0) throw ConfigError("h-margin must be nonnegative");
  // RK4 with the fourth-order stencil is stable up to about 0.52.
  if (!(cfl > 0.0 && cfl <= 0.5)) throw ConfigError("cfl must lie in (0, 0.5]");
  if (records_per_decade < 1 || records_per_decade > 1000) throw ConfigError("records-per-decade must be in [1, 1000]");
  if (backend != "serial" && backend != "openmp") throw ConfigError("backend must be serial or openmp");
  for (int c : criteria)
    if (c < 1 || c > 10) throw ConfigError("criteria are numbered 1 to 10");
  positive(params.c, "c");
}

ParsedArgs parse_args(int argc, const char* const* argv) {
  CLI::App app{"Ricci flow on homogeneous geometries: curvature, flows, solitons and flat bundles", "homflow"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "homflow 1.0.0");

  // Every option is captured as raw text and applied through the same path as config files.
  struct Bound {
    CLI::App* sub;
    CLI::Option* opt;
    std::string key;
  };
  std::vector<Bound> options;
  std::map<std::string, std::string> raw;
  std::string config_path;

  auto add = [&](CLI::App* sub, const std::string& flag, const std::string& help) {
    const std::string key = key_of(flag);
    options.push_back({sub, sub->add_option(flag, raw[sub->get_name() + "/" + key], help), key});
  };
  auto add_flag = [&](CLI::App* sub, const std::string& flag, const std::string& help) {
    const std::string key = key_of(flag);
    options.push_back({sub, sub->add_flag(flag, help), key});
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config document; flags override its values");
    add(sub, "--out", "output path (stdout when omitted)");
  };
  auto class_opts = [&](CLI::App* sub) {
    add(sub, "--class", "geometry class tag, e.g. nil3 or sol3*r1");
    add(sub, "--k", "parameter k of A2/A3");
    add(sub, "--c", "Einstein constant of constant-curvature classes");
  };

  CLI::App* catalog = app.add_subcommand("catalog", "dump catalog classes as JSON, one document per line");
  common(catalog);
  class_opts(catalog);

  CLI::App* curvature = app.add_subcommand("curvature", "curvature report of a diagonal left-invariant metric");
  common(curvature);
  class_opts(curvature);
  add(curvature, "--init", "metric coefficients (comma list)");

  CLI::App* flow = app.add_subcommand("flow", "integrate the Ricci flow and write a CSV trajectory");
  common(flow);
  class_opts(flow);
  add(flow, "--init", "initial coefficients (comma list)");
  add(flow, "--t0", "initial time");
  add(flow, "--t1", "final time");
  add(flow, "--rtol", "relative tolerance");
  add(flow, "--atol", "absolute tolerance");
  add(flow, "--samples-per-decade", "output samples per decade of t");

  CLI::App* closed = app.add_subcommand("closed-form", "evaluate the exact solution where one is known");
  common(closed);
  class_opts(closed);
  add(closed, "--init", "coefficients at t0");
  add(closed, "--t0", "time at which --init holds (default 0)");
  add(closed, "--t-list", "evaluation times (comma list)");

  CLI::App* rescale = app.add_subcommand("rescale-limit", "deviation of normalized rescaled flows from the soliton");
  common(rescale);
  class_opts(rescale);
  add(rescale, "--init", "initial coefficients at t0");
  add(rescale, "--t0", "initial time");
  add(rescale, "--s-list", "rescaling factors (comma list)");
  add(rescale, "--window-lo", "start of the rescaled time window");
  add(rescale, "--window-hi", "end of the rescaled time window");
  add(rescale, "--rtol", "relative tolerance");
  add(rescale, "--atol", "absolute tolerance");

  CLI::App* fit = app.add_subcommand("fit", "power-law fit of one CSV column against time");
  common(fit);
  add(fit, "--in", "input CSV");
  add(fit, "--column", "column to fit");
  add(fit, "--time-column", "time column (default t)");
  add(fit, "--window", "tail fraction of the log-time span");
  add(fit, "--log-power", "fix q in c t^p (ln t)^q");

  CLI::App* soliton = app.add_subcommand("soliton-check", "soliton equation residuals as JSON");
  common(soliton);
  class_opts(soliton);
  add(soliton, "--t-list", "times (comma list)");

  CLI::App* bundle = app.add_subcommand("bundle-flow", "Ricci flow of a flat bundle metric over a twisted circle");
  common(bundle);
  add(bundle, "--grid", "grid points M");
  add(bundle, "--fiber-dim", "fiber dimension N");
  add(bundle, "--holonomy", "holonomy matrix, rows separated by ';'");
  add(bundle, "--seed", "initial fiber field: constant, geodesic or fourier");
  add(bundle, "--amplitude", "fourier perturbation size");
  add(bundle, "--modes", "fourier modes");
  add(bundle, "--rng-seed", "random seed for fourier perturbations");
  add(bundle, "--h0", "constant initial base metric");
  add(bundle, "--h-margin", "relative margin above the smallest admissible base metric");
  add(bundle, "--t0", "initial time");
  add(bundle, "--t1", "final time");
  add(bundle, "--cfl", "time step factor, dt = cfl * min(h) * dalpha^2");
  add(bundle, "--records-per-decade", "output rows per decade of t");
  add(bundle, "--backend", "serial or openmp");
  add_flag(bundle, "--freeze-base", "keep the base metric fixed (harmonic map heat flow)");

  CLI::App* selftest = app.add_subcommand("selftest", "run the acceptance checks and print a pass/fail table");
  common(selftest);
  add(selftest, "--criteria", "subset of criteria to run (comma list)");
  add(selftest, "--calibration", "frozen calibration thresholds (JSON)");

  ParsedArgs out;
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    std::ostringstream os;
    app.exit(e, os, os);
    out.exit_code = 0;
    out.message = os.str();
    return out;
  } catch (const CLI::ParseError& e) {
    std::ostringstream os;
    app.exit(e, os, os);
    out.exit_code = 2;
    out.message = os.str();
    return out;
  }

  CLI::App* sub = app.get_subcommands().front();
  RunConfig& cfg = out.config;
  if (sub->get_name() == "closed-form") cfg.t0 = 0.0;
  if (sub->get_name() == "rescale-limit") {
    cfg.t0 = 1.0;
    cfg.rtol = 1e-11;
    cfg.atol = 1e-14;
  }
  if (sub->get_name() == "bundle-flow") {
    cfg.t0 = 1.0;
    cfg.t1 = 1000.0;
  }
  if (!config_path.empty()) apply_config_file(cfg, config_path);
  for (const auto& [owner, opt, key] : options) {
    if (owner != sub || opt->count() == 0) continue;
    if (key == "freeze_base") {
      apply(cfg, key, json(true));
    } else {
      apply_config_value(cfg, key, raw[sub->get_name() + "/" + key]);
    }
  }
  cfg.command = sub->get_name();
  return out;
}

}  // namespace homflow
