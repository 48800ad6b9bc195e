#include "homflow/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "homflow/acceptance.hpp"
#include "homflow/bundle.hpp"
#include "homflow/csv.hpp"
#include "homflow/curvature.hpp"
#include "homflow/errors.hpp"
#include "homflow/flow.hpp"
#include "homflow/rescale.hpp"
#include "homflow/soliton.hpp"

namespace homflow {
namespace {

using nlohmann::json;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty() || path == "-") {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json factor_json(const Factor& f) {
  json j{{"label", f.label}, {"dim", f.dim()}};
  if (f.is_lie()) {
    const auto& sc = std::get<StructureConstants>(f.model);
    json c = json::array();
    for (int k = 0; k < sc.dim(); ++k) {
      json ck = json::array();
      for (int i = 0; i < sc.dim(); ++i) {
        json row = json::array();
        for (int l = 0; l < sc.dim(); ++l) row.push_back(sc(k, i, l));
        ck.push_back(std::move(row));
      }
      c.push_back(std::move(ck));
    }
    j["structure_constants"] = std::move(c);
  } else {
    const auto& e = std::get<EinsteinSpace>(f.model);
    j["einstein_constant"] = e.einstein_constant;
    j["kahler"] = e.kahler;
  }
  return j;
}

json class_json(const GeometryClass& cls) {
  json j;
  j["id"] = cls.id;
  j["dim"] = cls.geometry.dim();
  if (cls.geometry.single_lie_factor()) {
    j["structure_constants"] = factor_json(cls.geometry.factors()[0])["structure_constants"];
  } else {
    j["structure_constants"] = nullptr;
  }
  json factors = json::array();
  for (const auto& f : cls.geometry.factors()) factors.push_back(factor_json(f));
  j["factors"] = std::move(factors);
  j["default_init"] = cls.default_init;
  j["immortal"] = is_immortal(cls.kind);
  if (cls.soliton) {
    const SolitonSpec& s = *cls.soliton;
    std::vector<double> exponents;
    for (double w : s.weights) exponents.push_back(1.0 - 2.0 * w);
    j["soliton"] = {{"limit_id", s.limit_id},
                    {"weights", s.weights},
                    {"coefficients_at_t1", s.coeffs(1.0)},
                    {"time_exponents", exponents}};
  } else {
    j["soliton"] = nullptr;
  }
  json laws = json::array();
  for (const auto& a : cls.asymptotics) {
    json l{{"coefficient", a.coefficient + 1}, {"exponent", a.exponent}, {"log_power", a.log_power}, {"note", a.note}};
    if (a.value) {
      l["value_at_default_init"] = a.value(cls.default_init);
    } else {
      l["value_at_default_init"] = nullptr;
    }
    laws.push_back(std::move(l));
  }
  j["asymptotics"] = std::move(laws);
  return j;
}

CoeffVector init_of(const RunConfig& cfg, const GeometryClass& cls) {
  CoeffVector init = cfg.init ? *cfg.init : cls.default_init;
  if (static_cast<int>(init.size()) != cls.coefficient_count()) {
    throw ConfigError("class " + cls.id + " takes " + std::to_string(cls.coefficient_count()) +
                      " coefficients, got " + std::to_string(init.size()));
  }
  return init;
}

std::vector<std::string> coefficient_header(int n) {
  std::vector<std::string> h{"t"};
  for (int i = 1; i <= n; ++i) h.push_back("c" + std::to_string(i));
  return h;
}

int cmd_catalog(const RunConfig& cfg, std::ostream& out) {
  std::ostringstream os;
  if (!cfg.class_id.empty()) {
    os << class_json(load_user_class(cfg.class_id, cfg.params)).dump() << '\n';
  } else {
    for (const auto& tag : catalog_tags()) os << class_json(load_catalog(tag, cfg.params)).dump() << '\n';
  }
  emit(cfg.out_path, os.str(), out);
  return kExitOk;
}

int cmd_curvature(const RunConfig& cfg, std::ostream& out) {
  const GeometryClass cls = load_user_class(cfg.class_id, cfg.params);
  const CoeffVector x = init_of(cfg, cls);
  const CurvatureReport r = curvature_report(cls.geometry, x);
  json j{{"class", cls.id},
         {"coefficients", x},
         {"frame_metric_diagonal", cls.geometry.frame_diagonal(x)},
         {"sectional", matrix_json(r.sectional)},
         {"ricci", matrix_json(r.ricci)},
         {"scalar", r.scalar},
         {"max_abs_sectional", r.sectional.cwiseAbs().maxCoeff()},
         {"bianchi_residual", bianchi_residual(r.riemann)}};
  emit(cfg.out_path, j.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_flow(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  FlowProblem p;
  p.cls = load_user_class(cfg.class_id, cfg.params);
  p.init = init_of(cfg, p.cls);
  p.t0 = cfg.t0;
  p.t1 = cfg.t1;
  p.rtol = cfg.rtol;
  p.atol = cfg.atol;
  p.samples_per_decade = cfg.samples_per_decade;
  const Trajectory traj = integrate(p);

  CsvTable table;
  table.header = coefficient_header(p.cls.coefficient_count());
  table.header.push_back("max_abs_K");
  table.header.push_back("t_max_abs_K");
  for (const Sample& s : traj.samples) {
    std::vector<double> row{s.t};
    row.insert(row.end(), s.coeffs.begin(), s.coeffs.end());
    row.push_back(s.max_abs_k);
    row.push_back(s.t_max_abs_k);
    table.rows.push_back(std::move(row));
  }
  write_csv(cfg.out_path, table, out);
  if (!traj.completed()) {
    err << "flow stopped early (" << to_string(traj.terminated) << "): " << traj.message << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

int cmd_closed_form(const RunConfig& cfg, std::ostream& out) {
  const GeometryClass cls = load_user_class(cfg.class_id, cfg.params);
  if (!has_closed_form(cls.kind)) throw ConfigError("class " + cls.id + " has no closed-form solution");
  const CoeffVector init = init_of(cfg, cls);
  CsvTable table;
  table.header = coefficient_header(cls.coefficient_count());
  for (double t : cfg.t_list) {
    const ClosedForm cf = closed_form(cls, init, t, cfg.t0);
    std::vector<double> row{t};
    row.insert(row.end(), cf.values.begin(), cf.values.end());
    table.rows.push_back(std::move(row));
  }
  write_csv(cfg.out_path, table, out);
  return kExitOk;
}

int cmd_rescale_limit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const GeometryClass cls = load_user_class(cfg.class_id, cfg.params);
  if (!cls.soliton) throw ConfigError("class " + cls.id + " has no limit soliton in the catalog");
  if (!cls.normalizer) throw ConfigError("class " + cls.id + " has no power-law normalizer for its rescaled limit");
  const CoeffVector init = init_of(cfg, cls);
  const double s_max = *std::max_element(cfg.s_list.begin(), cfg.s_list.end());
  for (double s : cfg.s_list)
    if (s * cfg.window_lo <= cfg.t0) throw ConfigError("every s * window-lo must exceed t0");

  FlowProblem p{cls, init, cfg.t0, s_max * cfg.window_hi * 1.05, cfg.rtol, cfg.atol, 10};
  const Trajectory traj = integrate(p);
  const NormalizerSpec norm = cls.normalizer(init);

  CsvTable table;
  table.header = {"s", "deviation"};
  for (int i = 1; i <= cls.coefficient_count(); ++i) table.header.push_back("c" + std::to_string(i) + "_hat");
  int status = kExitOk;
  for (double s : cfg.s_list) {
    if (s * cfg.window_hi > traj.dense->t_max()) {
      err << "flow stopped at t = " << format_double(traj.dense->t_max()) << " before covering s = " << format_double(s)
          << '\n';
      status = kExitNumerical;
      break;
    }
    const Trajectory r = rescaled_trajectory(traj, s, norm, cfg.window_lo, cfg.window_hi, 20);
    std::vector<double> row{s, soliton_deviation(r, *cls.soliton)};
    const CoeffVector c = r.samples.front().coeffs;
    row.insert(row.end(), c.begin(), c.end());
    table.rows.push_back(std::move(row));
  }
  write_csv(cfg.out_path, table, out);
  return status;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out) {
  if (cfg.in_path.empty()) throw ConfigError("fit needs --in");
  if (cfg.column.empty()) throw ConfigError("fit needs --column");
  const CsvTable table = read_csv(cfg.in_path);
  const std::size_t tc = table.column(cfg.time_column);
  const std::size_t vc = table.column(cfg.column);
  std::vector<std::pair<double, double>> samples;
  for (const auto& row : table.rows)
    if (std::isfinite(row[tc]) && std::isfinite(row[vc])) samples.emplace_back(row[tc], row[vc]);

  FitOptions opt;
  opt.tail_fraction = cfg.window;
  opt.log_power = cfg.log_power;
  const FitResult f = fit_power_law(samples, opt);
  json j{{"column", cfg.column},
         {"exponent", f.exponent},
         {"coefficient", f.coefficient},
         {"log_power", f.log_power},
         {"model", f.model == FitModel::PurePower ? "power" : "log-corrected"},
         {"residual", f.residual},
         {"points", f.points}};
  emit(cfg.out_path, j.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_soliton_check(const RunConfig& cfg, std::ostream& out) {
  const GeometryClass cls = load_user_class(cfg.class_id, cfg.params);
  const SolitonSpec& spec = soliton_catalog(cls);
  json reports = json::array();
  double worst = 0.0;
  for (double t : cfg.t_list) {
    const ResidualReport r = soliton_residual(spec, t);
    worst = std::max(worst, r.max_norm);
    reports.push_back({{"t", t}, {"max_norm", r.max_norm}, {"components", matrix_json(r.components)}});
  }
  json j{{"class", cls.id},
         {"limit_id", spec.limit_id},
         {"weights", spec.weights},
         {"max_norm", worst},
         {"reports", std::move(reports)}};
  emit(cfg.out_path, j.dump(2) + "\n", out);
  return kExitOk;
}

int cmd_bundle_flow(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const int N = cfg.fiber_dim;
  Eigen::MatrixXd rho(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) rho(i, j) = cfg.holonomy[static_cast<std::size_t>(i * N + j)];

  BundleSeed seed;
  seed.kind = parse_seed_kind(cfg.seed_kind);
  seed.amplitude = cfg.amplitude;
  seed.modes = cfg.modes;
  seed.seed = cfg.rng_seed;
  seed.h_value = cfg.h0;
  seed.h_margin = cfg.h_margin;
  BundleState state;
  try {
    state = make_bundle_state(N, cfg.grid, rho, cfg.t0, seed);
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("bad bundle data: ") + e.what());
  }

  BundleFlowOptions opt;
  opt.cfl = cfg.cfl;
  opt.records_per_decade = cfg.records_per_decade;
  opt.freeze_base = cfg.freeze_base;
  opt.backend = cfg.backend == "openmp" ? Backend::OpenMP : Backend::Serial;

  CsvTable table;
  table.header = {"t", "energy", "v_tilde", "max_harmonic_residual", "max_einstein_residual", "det_drift"};
  int status = kExitOk;
  try {
    const BundleRun run = bundle_flow(state, cfg.t1, opt);
    for (const BundleRecord& r : run.records)
      table.rows.push_back({r.t, r.energy, r.v_tilde, r.max_harmonic_residual, r.max_einstein_residual, r.det_drift});
  } catch (const DomainError& e) {
    err << "bundle flow failed: " << e.what() << '\n';
    status = kExitNumerical;
  }
  write_csv(cfg.out_path, table, out);
  return status;
}

int cmd_selftest(const RunConfig& cfg, std::ostream& out) {
  const Calibration cal = cfg.calibration_path.empty() ? Calibration{} : Calibration::load(cfg.calibration_path);
  const auto results = run_acceptance(cfg.criteria, cal);
  std::ostringstream os;
  print_results(os, results);
  emit(cfg.out_path, os.str(), out);
  const bool all = std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.pass; });
  return all ? kExitOk : kExitNumerical;
}

}  // namespace

GeometryClass load_user_class(const std::string& id, const CatalogParams& params) {
  if (id.empty()) throw ConfigError("--class is required");
  static const char* const extinct[] = {"s3", "s2", "s2xr", "s2*r1", "r1*s2", "s4", "cp2"};
  const std::string key = lower(id);
  for (const char* e : extinct)
    if (key == e) throw ConfigError("class '" + id + "' is not in the catalog: finite extinction time, excluded");
  try {
    return load_catalog(id, params);
  } catch (const CatalogError& e) {
    throw ConfigError(e.what());
  }
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    cfg.validate();
    if (cfg.command == "catalog") return cmd_catalog(cfg, out);
    if (cfg.command == "curvature") return cmd_curvature(cfg, out);
    if (cfg.command == "flow") return cmd_flow(cfg, out, err);
    if (cfg.command == "closed-form") return cmd_closed_form(cfg, out);
    if (cfg.command == "rescale-limit") return cmd_rescale_limit(cfg, out, err);
    if (cfg.command == "fit") return cmd_fit(cfg, out);
    if (cfg.command == "soliton-check") return cmd_soliton_check(cfg, out);
    if (cfg.command == "bundle-flow") return cmd_bundle_flow(cfg, out, err);
    if (cfg.command == "selftest") return cmd_selftest(cfg, out);
    throw ConfigError("unknown command '" + cfg.command + "'");
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  ParsedArgs parsed;
  try {
    parsed = parse_args(argc, argv);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (parsed.exit_code) {
    (*parsed.exit_code == 0 ? out : err) << parsed.message;
    return *parsed.exit_code;
  }
  return run(parsed.config, out, err);
}

}  // namespace homflow
