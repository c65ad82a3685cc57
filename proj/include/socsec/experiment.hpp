#pragma once

// Experiment runner behind the socsec command-line tool: JSON configs,
// the built-in figure presets, and CSV emission.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "socsec/errors.hpp"
#include "socsec/gamma_approx.hpp"
#include "socsec/montecarlo.hpp"
#include "socsec/outage.hpp"
#include "socsec/params.hpp"

namespace socsec {

enum class Metric { Cop, SopSingle, SopMulti, Histogram };
enum class RunMode { Closed, MonteCarlo, Both };

inline const char* to_string(Metric m) {
  switch (m) {
    case Metric::Cop: return "cop";
    case Metric::SopSingle: return "sop_single";
    case Metric::SopMulti: return "sop_multi";
    case Metric::Histogram: return "histogram";
  }
  return "?";
}

struct CompatFlags {
  bool paper_nu_tz = false;
  bool printed_ty = false;
  bool nja = false;
  bool relay_sampling_mode = false;
  bool exact_jammer_domain = false;
  bool trust_marks = false;
  bool phase_simulation = false;
};

/// One curve of a figure: field overrides on top of the base parameters.
struct Series {
  std::string label;
  std::map<std::string, double> set;
  bool nja = false;
};

struct ExperimentConfig {
  std::string name = "custom";
  Metric metric = Metric::Cop;
  SystemParams params{};
  /// "beta_db", "beta_e_db", "eve_distance", "K", or a parameter field name.
  std::string sweep_variable = "beta_db";
  std::vector<double> grid;
  std::vector<Series> series{Series{"base", {}, false}};
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  RunMode mode = RunMode::Both;
  CompatFlags flags{};
  std::string output_path;
  double beta = 1.0;
  double beta_e = 1.0;
  double eve_distance = 45.0;
  /// radians, measured from the source-destination axis
  double eve_angle = 0.0;
  std::size_t K = 11;
  PowerVariable variable = PowerVariable::Ty;
};

// ---------------------------------------------------------------------------
// Parsing helpers

/// "0dB" / "-19 dB" in decibels, otherwise a linear ratio.
inline double parse_threshold(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    const std::string unit = s.substr(used);
    if (unit == "dB" || unit == "db") return db_to_linear(v);
    if (unit.empty()) {
      if (v < 0.0) throw ConfigError("negative linear threshold: " + text);
      return v;
    }
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
  }
  throw ConfigError("cannot parse threshold '" + text + "' (expected e.g. 0dB or 1.0)");
}

/// "10dBm" in decibel-milliwatts, otherwise linear milliwatts.
inline double parse_power(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s += c;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    const std::string unit = s.substr(used);
    if (unit == "dBm" || unit == "dbm") return dbm_to_mw(v);
    if (unit.empty() || unit == "mW") return v;
  } catch (const std::invalid_argument&) {
  } catch (const std::out_of_range&) {
  }
  throw ConfigError("cannot parse power '" + text + "' (expected e.g. 10dBm or 10 for mW)");
}

inline PowerVariable parse_variable(const std::string& s) {
  if (s == "Ty") return PowerVariable::Ty;
  if (s == "Iy") return PowerVariable::Iy;
  if (s == "Tz") return PowerVariable::Tz;
  if (s == "Iz") return PowerVariable::Iz;
  throw ConfigError("unknown variable '" + s + "' (Ty, Iy, Tz or Iz)");
}

inline RunMode parse_mode(const std::string& s) {
  if (s == "closed") return RunMode::Closed;
  if (s == "mc") return RunMode::MonteCarlo;
  if (s == "both") return RunMode::Both;
  throw ConfigError("unknown mode '" + s + "' (closed, mc or both)");
}

inline Metric parse_metric(const std::string& s) {
  if (s == "cop") return Metric::Cop;
  if (s == "sop_single") return Metric::SopSingle;
  if (s == "sop_multi") return Metric::SopMulti;
  if (s == "histogram") return Metric::Histogram;
  throw ConfigError("unknown metric '" + s + "'");
}

/// Parameter fields addressable by name in configs, series and sweeps.
/// Powers are in dBm here; "cq" sets c2 = c1 - cq.
inline bool set_param_field(SystemParams& p, const std::string& name, double v) {
  if (name == "lambda") p.lambda = v;
  else if (name == "c1") p.c1 = v;
  else if (name == "c2") p.c2 = v;
  else if (name == "cq") p.c2 = p.c1 - v;
  else if (name == "L1") p.L1 = v;
  else if (name == "L2") p.L2 = v;
  else if (name == "LG") p.LG = v;
  else if (name == "d") p.d = v;
  else if (name == "alpha") p.alpha = v;
  else if (name == "P_R_dbm") p.P_R = dbm_to_mw(v);
  else if (name == "P_j_dbm") p.P_j = dbm_to_mw(v);
  else if (name == "lambda_e") p.lambda_e = v;
  else if (name == "guard") p.guard = v;
  else return false;
  return true;
}

inline bool is_point_variable(const std::string& name) {
  return name == "beta_db" || name == "beta_e_db" || name == "eve_distance" || name == "K";
}

/// Applies overrides with "cq" last so it sees the final c1. "eve_distance"
/// is a placement, not a parameter, and is skipped here.
inline void apply_overrides(SystemParams& p, const std::map<std::string, double>& set) {
  for (const auto& [k, v] : set)
    if (k != "cq" && k != "eve_distance" && !set_param_field(p, k, v)) throw ConfigError("unknown parameter field '" + k + "'");
  if (auto it = set.find("cq"); it != set.end()) set_param_field(p, "cq", it->second);
}

inline void validate(const ExperimentConfig& c) {
  if (c.metric != Metric::Histogram && c.grid.empty()) throw ConfigError("sweep grid is empty");
  if (c.series.empty()) throw ConfigError("no series");
  if (c.trials < 1) throw ConfigError("trials must be >= 1");
  if (c.K < 1) throw ConfigError("K must be >= 1");
  if (!(c.beta >= 0.0) || !(c.beta_e >= 0.0)) throw ConfigError("thresholds must be >= 0");
  if (c.metric != Metric::Histogram) {
    SystemParams probe = c.params;
    if (!is_point_variable(c.sweep_variable) && !set_param_field(probe, c.sweep_variable, 0.0))
      throw ConfigError("unknown sweep variable '" + c.sweep_variable + "'");
  }
  if (c.sweep_variable == "K")
    for (double k : c.grid)
      if (!(k >= 1.0) || k != std::floor(k)) throw ConfigError("K grid values must be integers >= 1");
  for (const Series& s : c.series) {
    SystemParams p = c.params;
    apply_overrides(p, s.set);
    validate(p);
  }
}

namespace detail {

inline double number_or_dbm(const nlohmann::json& j, const std::string& key) {
  if (j.is_string()) return parse_power(j.get<std::string>());
  if (j.is_number()) return j.get<double>();
  throw ConfigError("field '" + key + "' must be a number (mW) or a string like \"10dBm\"");
}

inline double number_or_db(const nlohmann::json& j, const std::string& key) {
  if (j.is_string()) return parse_threshold(j.get<std::string>());
  if (j.is_number()) return j.get<double>();
  throw ConfigError("field '" + key + "' must be a number (linear) or a string like \"0dB\"");
}

}  // namespace detail

/// Fills `c` from a JSON document. Unknown keys are rejected.
inline void apply_json(ExperimentConfig& c, const nlohmann::json& j) {
  using nlohmann::json;
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "name") c.name = v.get<std::string>();
      else if (key == "metric") c.metric = parse_metric(v.get<std::string>());
      else if (key == "params") {
        for (const auto& [pk, pv] : v.items()) {
          if (pk == "P_R") c.params.P_R = detail::number_or_dbm(pv, pk);
          else if (pk == "P_j") c.params.P_j = detail::number_or_dbm(pv, pk);
          else if (!set_param_field(c.params, pk, pv.get<double>()))
            throw ConfigError("unknown parameter field '" + pk + "'");
        }
      } else if (key == "sweep") {
        c.sweep_variable = v.at("variable").get<std::string>();
        if (v.contains("values")) {
          c.grid = v.at("values").get<std::vector<double>>();
        } else if (v.contains("from")) {
          const double from = v.at("from").get<double>();
          const double to = v.at("to").get<double>();
          const double step = v.at("step").get<double>();
          if (!(step > 0.0) || to < from) throw ConfigError("sweep range needs step > 0 and to >= from");
          c.grid.clear();
          for (long i = 0; from + i * step <= to + 1e-9 * step; ++i) c.grid.push_back(from + i * step);
        }
      } else if (key == "series") {
        c.series.clear();
        for (const auto& s : v) {
          Series out;
          out.label = s.value("label", std::string("series") + std::to_string(c.series.size()));
          if (s.contains("set")) out.set = s.at("set").get<std::map<std::string, double>>();
          out.nja = s.value("nja", false);
          c.series.push_back(out);
        }
      } else if (key == "trials") c.trials = v.get<std::size_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "workers") c.workers = v.get<unsigned>();
      else if (key == "mode") c.mode = parse_mode(v.get<std::string>());
      else if (key == "output") c.output_path = v.get<std::string>();
      else if (key == "beta") c.beta = detail::number_or_db(v, key);
      else if (key == "beta_e") c.beta_e = detail::number_or_db(v, key);
      else if (key == "eve_distance") c.eve_distance = v.get<double>();
      else if (key == "eve_angle_deg") c.eve_angle = v.get<double>() * std::numbers::pi / 180.0;
      else if (key == "K") c.K = v.get<std::size_t>();
      else if (key == "variable") c.variable = parse_variable(v.get<std::string>());
      else if (key == "paper_nu_tz") c.flags.paper_nu_tz = v.get<bool>();
      else if (key == "printed_ty") c.flags.printed_ty = v.get<bool>();
      else if (key == "nja") c.flags.nja = v.get<bool>();
      else if (key == "relay_sampling_mode") c.flags.relay_sampling_mode = v.get<bool>();
      else if (key == "exact_jammer_domain") c.flags.exact_jammer_domain = v.get<bool>();
      else if (key == "trust_marks") c.flags.trust_marks = v.get<bool>();
      else if (key == "phase_simulation") c.flags.phase_simulation = v.get<bool>();
      else throw ConfigError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config type error: ") + e.what());
  }
}

inline ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  apply_json(base, j);
  return base;
}

// ---------------------------------------------------------------------------
// Presets

struct Preset {
  std::string name;
  std::string description;
  ExperimentConfig config;
};

namespace detail {

inline std::vector<double> range(double from, double to, double step) {
  std::vector<double> v;
  for (long i = 0; from + i * step <= to + 1e-9 * step; ++i) v.push_back(from + i * step);
  return v;
}

}  // namespace detail

/// The figure presets, each pinned to its caption parameters (the defaults
/// of SystemParams) with the sweeps listed in the description.
inline std::vector<Preset> presets() {
  std::vector<Preset> out;
  auto make = [](std::string name, Metric metric) {
    ExperimentConfig c;
    c.name = std::move(name);
    c.metric = metric;
    return c;
  };
  {
    ExperimentConfig c = make("fig3", Metric::Histogram);
    c.series = {{"Ty", {}, false}};
    out.push_back({"fig3", "Gamma fit vs histogram of T(y) (or --variable Iy/Tz/Iz), 100 bins", c});
  }
  {
    ExperimentConfig c = make("fig4", Metric::Cop);
    c.sweep_variable = "beta_db";
    c.grid = detail::range(-30.0, 0.0, 1.5);
    out.push_back({"fig4", "COP vs beta in [-30, 0] dB (21 points)", c});
  }
  {
    ExperimentConfig c = make("fig5", Metric::SopSingle);
    c.sweep_variable = "eve_distance";
    c.grid = detail::range(20.0, 100.0, 5.0);
    c.beta_e = 1.0;
    out.push_back({"fig5", "single-eavesdropper SOP vs |z| in [20, 100] m at beta_e = 0 dB", c});
  }
  {
    ExperimentConfig c = make("fig6a", Metric::SopSingle);
    c.sweep_variable = "beta_e_db";
    c.grid = detail::range(-10.0, 10.0, 2.5);
    c.series.clear();
    for (double z : {20.0, 60.0}) {
      for (double c1 : {0.8, 0.9}) {
        std::ostringstream label;
        label << "C1=" << c1 << " |z|=" << z;
        c.series.push_back({label.str(), {{"c1", c1}, {"cq", 0.01}, {"eve_distance", z}}, false});
        c.series.push_back({label.str() + " NJA", {{"c1", c1}, {"cq", 0.01}, {"eve_distance", z}}, true});
      }
    }
    out.push_back({"fig6a", "single-eavesdropper SOP vs beta_e for C1 in {0.8, 0.9} x |z| in {20, 60} m, with NJA", c});
  }
  {
    ExperimentConfig c = make("fig6b", Metric::SopSingle);
    c.sweep_variable = "beta_e_db";
    c.grid = detail::range(-10.0, 10.0, 2.5);
    c.series.clear();
    for (double z : {20.0, 60.0}) {
      for (double cq : {0.01, 0.05}) {
        std::ostringstream label;
        label << "Cq=" << cq << " |z|=" << z;
        c.series.push_back({label.str(), {{"cq", cq}, {"eve_distance", z}}, false});
      }
      std::ostringstream label;
      label << "NJA |z|=" << z;
      c.series.push_back({label.str(), {{"eve_distance", z}}, true});
    }
    out.push_back({"fig6b", "single-eavesdropper SOP vs beta_e for Cq in {0.01, 0.05} x |z| in {20, 60} m, with NJA", c});
  }
  {
    ExperimentConfig c = make("fig7", Metric::SopMulti);
    c.sweep_variable = "K";
    c.grid = detail::range(1.0, 20.0, 1.0);
    c.beta_e = 1.0;
    out.push_back({"fig7", "multi-eavesdropper upper bound vs truncation K in [1, 20] at beta_e = 0 dB", c});
  }
  {
    ExperimentConfig c = make("fig8", Metric::SopMulti);
    c.sweep_variable = "beta_e_db";
    c.grid = detail::range(-10.0, 10.0, 2.5);
    c.K = 11;
    out.push_back({"fig8", "multi-eavesdropper upper bound (K = 11) vs beta_e in [-10, 10] dB", c});
  }
  {
    ExperimentConfig c = make("fig9", Metric::Cop);
    c.sweep_variable = "beta_db";
    c.grid = detail::range(-30.0, 0.0, 1.5);
    c.series.clear();
    for (double c1 : {0.8, 0.9})
      for (double cq : {0.01, 0.05}) {
        std::ostringstream label;
        label << "C1=" << c1 << " Cq=" << cq;
        c.series.push_back({label.str(), {{"c1", c1}, {"cq", cq}}, false});
      }
    out.push_back({"fig9", "COP vs beta for C1 in {0.8, 0.9} x Cq in {0.01, 0.05}", c});
  }
  {
    ExperimentConfig c = make("fig10", Metric::SopMulti);
    c.sweep_variable = "beta_e_db";
    c.grid = detail::range(-10.0, 10.0, 2.5);
    c.K = 11;
    c.series.clear();
    for (double le : {0.0005, 0.001})
      for (double cq : {0.01, 0.05}) {
        std::ostringstream label;
        label << "lambda_e=" << le << " Cq=" << cq;
        c.series.push_back({label.str(), {{"lambda_e", le}, {"cq", cq}}, false});
      }
    out.push_back({"fig10", "multi-eavesdropper upper bound vs beta_e for lambda_e in {5e-4, 1e-3} x Cq in {0.01, 0.05}", c});
  }
  return out;
}

inline ExperimentConfig preset_config(const std::string& name) {
  for (const Preset& p : presets())
    if (p.name == name) return p.config;
  throw ConfigError("unknown preset '" + name + "'");
}

// ---------------------------------------------------------------------------
// Running

struct CsvRow {
  std::string series;
  double sweep_value = 0.0;
  std::optional<double> closed;
  std::optional<double> mc;
  std::optional<double> mc_ci;
};

struct RunResult {
  std::vector<CsvRow> rows;
  /// Human-readable notes: fitted parameters, assumptions, warnings.
  std::vector<std::string> summary;
};

inline std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const ExperimentConfig& c, const RunResult& r) {
  os << "series,sweep_variable,sweep_value,closed,mc,mc_ci_half_width,abs_gap\n";
  for (const CsvRow& row : r.rows) {
    std::string label = row.series;
    if (label.find_first_of(",\"") != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : label) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      label = quoted + "\"";
    }
    const std::string var = c.metric == Metric::Histogram ? "bin_center" : c.sweep_variable;
    os << label << ',' << var << ',' << format_number(row.sweep_value) << ',';
    os << (row.closed ? format_number(*row.closed) : "") << ',';
    os << (row.mc ? format_number(*row.mc) : "") << ',';
    os << (row.mc_ci ? format_number(*row.mc_ci) : "") << ',';
    if (row.closed && row.mc) os << format_number(std::abs(*row.closed - *row.mc));
    os << '\n';
  }
}

namespace detail {

/// Scenario of one grid point after series overrides and the sweep value.
struct PointSetup {
  SystemParams params;
  double beta = 1.0;
  double beta_e = 1.0;
  Point eve{};
  std::size_t K = 11;
};

inline PointSetup setup_point(const ExperimentConfig& c, const Series& s, std::optional<double> sweep) {
  PointSetup out;
  out.params = c.params;
  out.beta = c.beta;
  out.beta_e = c.beta_e;
  out.K = c.K;
  double eve_distance = c.eve_distance;
  std::map<std::string, double> set = s.set;
  if (auto it = set.find("eve_distance"); it != set.end()) {
    eve_distance = it->second;
    set.erase(it);
  }
  apply_overrides(out.params, set);
  if (sweep) {
    const double v = *sweep;
    if (c.sweep_variable == "beta_db") out.beta = db_to_linear(v);
    else if (c.sweep_variable == "beta_e_db") out.beta_e = db_to_linear(v);
    else if (c.sweep_variable == "eve_distance") eve_distance = v;
    else if (c.sweep_variable == "K") out.K = static_cast<std::size_t>(v);
    else if (c.sweep_variable == "cq") out.params.c2 = out.params.c1 - v;
    else set_param_field(out.params, c.sweep_variable, v);
  }
  if (s.nja || c.flags.nja) out.params = out.params.without_jammers();
  out.eve = Point{eve_distance * std::cos(c.eve_angle), eve_distance * std::sin(c.eve_angle)};
  validate(out.params);
  return out;
}

inline ModelOptions model_options(const CompatFlags& f) {
  ModelOptions m;
  m.dest_signal = f.printed_ty ? DestSignalModel::Printed : DestSignalModel::ShotNoise;
  m.eve_signal = f.paper_nu_tz ? EveSignalModel::Printed : EveSignalModel::Rederived;
  m.jammer_domain = f.exact_jammer_domain ? JammerDomain::Exact : JammerDomain::Flabellate;
  return m;
}

inline SimOptions sim_options(const CompatFlags& f) {
  SimOptions s;
  s.categorize = f.trust_marks ? CategorizeMode::TrustMarks : CategorizeMode::Thinned;
  s.phase_simulation = f.phase_simulation;
  return s;
}

/// Key of everything a simulation depends on besides the threshold.
inline std::string sim_key(const PointSetup& s) {
  std::ostringstream os;
  os.precision(17);
  const SystemParams& p = s.params;
  os << p.lambda << ' ' << p.c1 << ' ' << p.c2 << ' ' << p.L1 << ' ' << p.L2 << ' ' << p.LG << ' ' << p.d << ' '
     << p.alpha << ' ' << p.P_R << ' ' << p.P_j << ' ' << p.lambda_e << ' ' << p.guard << ' ' << s.eve.x << ' '
     << s.eve.y;
  return os.str();
}

inline double gamma_quantile(const GammaParams& g, double prob) {
  double lo = 0.0;
  double hi = g.mean() + 10.0 * std::sqrt(g.variance());
  while (gamma_cdf(hi, g) < prob) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (gamma_cdf(mid, g) < prob ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline GammaParams fitted_params(const ExperimentConfig& c, const PointSetup& s, const ModelOptions& m) {
  switch (c.variable) {
    case PowerVariable::Ty: return dest_signal_params(s.params, m);
    case PowerVariable::Iy: return interference_params(s.params, s.params.destination(), m);
    case PowerVariable::Tz: return eve_signal_params(s.params, s.eve, m);
    case PowerVariable::Iz: return interference_params(s.params, s.eve, m);
  }
  return {};
}

inline RunResult run_histogram(const ExperimentConfig& c) {
  RunResult r;
  const ModelOptions m = model_options(c.flags);
  const bool closed = c.mode != RunMode::MonteCarlo;
  const bool mc = c.mode != RunMode::Closed;
  for (const Series& s : c.series) {
    const PointSetup setup = setup_point(c, s, std::nullopt);
    const std::string label = s.label == "Ty" || s.label == "base" ? to_string(c.variable) : s.label;
    std::optional<GammaParams> g;
    if (closed) {
      g = fitted_params(c, setup, m);
      r.summary.push_back(label + ": fitted shape = " + format_number(g->shape) + ", scale = " + format_number(g->scale));
    }
    Histogram h;
    if (mc) {
      const MomentEstimate est = summarize(simulate_variable(setup.params, c.variable, {c.trials, c.seed, c.workers},
                                                             setup.eve, sim_options(c.flags)));
      h = est.histogram;
      r.summary.push_back(label + ": sample mean = " + format_number(est.mean) +
                          ", sample variance = " + format_number(est.variance));
      if (g) r.summary.push_back(label + ": histogram L1 distance = " + format_number(l1_distance(h, *g)));
    } else {
      const double top = gamma_quantile(*g, 0.995);
      h.edges.resize(101);
      for (int i = 0; i <= 100; ++i) h.edges[i] = top * i / 100.0;
    }
    for (std::size_t i = 0; i + 1 < h.edges.size(); ++i) {
      CsvRow row;
      row.series = label;
      const double lo = h.edges[i];
      const double hi = h.edges[i + 1];
      row.sweep_value = 0.5 * (lo + hi);
      if (g) row.closed = (gamma_cdf(hi, *g) - gamma_cdf(lo, *g)) / (hi - lo);
      if (mc) {
        const double prob = static_cast<double>(h.counts[i]) / static_cast<double>(h.total);
        row.mc = prob / (hi - lo);
        row.mc_ci = 1.96 * std::sqrt(prob * (1.0 - prob) / static_cast<double>(h.total)) / (hi - lo);
      }
      r.rows.push_back(row);
    }
  }
  return r;
}

}  // namespace detail

/// Runs every (series, grid point). Numerical failures are rethrown as
/// NonConvergent naming the offending grid point.
inline RunResult run(const ExperimentConfig& c) {
  validate(c);
  if (c.metric == Metric::Histogram) return detail::run_histogram(c);

  RunResult r;
  const ModelOptions m = detail::model_options(c.flags);
  const SimOptions sim = detail::sim_options(c.flags);
  const TrialPlan plan{c.trials, c.seed, c.workers};
  const bool closed = c.mode != RunMode::MonteCarlo;
  const bool mc = c.mode != RunMode::Closed;
  if (c.metric == Metric::SopSingle)
    r.summary.push_back("assumption: eavesdropper placed at angle " + format_number(c.eve_angle * 180.0 / std::numbers::pi) +
                        " deg from the source-destination axis (override with --eve-angle)");
  if (c.metric == Metric::SopMulti)
    r.summary.push_back("closed column is the truncated upper bound; mc is the simulated union event");

  for (const Series& s : c.series) {
    std::string cached_key;
    std::vector<double> samples;
    std::string bound_key;
    std::vector<OutageEstimate> bound;
    for (double v : c.grid) {
      CsvRow row;
      row.series = s.label;
      row.sweep_value = v;
      try {
        const detail::PointSetup setup = detail::setup_point(c, s, v);
        if (closed) {
          switch (c.metric) {
            case Metric::Cop: row.closed = cop_closed(setup.params, setup.beta, m).value; break;
            case Metric::SopSingle: {
              const OutageEstimate e = sop_single_closed(setup.params, setup.eve, setup.beta_e, m);
              row.closed = e.value;
              if (setup.params.lambda_r() > 0.0) {
                ModelOptions other = m;
                other.eve_signal = m.eve_signal == EveSignalModel::Printed ? EveSignalModel::Rederived
                                                                           : EveSignalModel::Printed;
                const GammaParams a = eve_signal_params(setup.params, setup.eve, m);
                const GammaParams b = eve_signal_params(setup.params, setup.eve, other);
                r.summary.push_back(s.label + " @ " + format_number(v) + ": T(z) shape " +
                                    (m.eve_signal == EveSignalModel::Printed ? "printed " : "re-derived ") +
                                    format_number(a.shape) + ", alternative " + format_number(b.shape));
              }
              break;
            }
            case Metric::SopMulti: {
              const std::size_t kmax = c.sweep_variable == "K" ? static_cast<std::size_t>(
                                                                     *std::max_element(c.grid.begin(), c.grid.end()))
                                                               : setup.K;
              const std::string key = detail::sim_key(setup) + ' ' + format_number(setup.beta_e) + ' ' +
                                      std::to_string(kmax);
              if (key != bound_key) {
                MultiBoundOptions bo;
                bo.model = m;
                bo.workers = c.workers;
                bo.sampling_seed = c.seed;
                bo.relay_sum = c.flags.relay_sampling_mode ? RelaySumMode::Sampled : RelaySumMode::ConditionalMean;
                bound = sop_multi_upper_curve(setup.params, setup.beta_e, kmax, bo);
                bound_key = key;
              }
              const OutageEstimate& e = bound[setup.K - 1];
              row.closed = e.value;
              for (const std::string& w : e.warnings) r.summary.push_back(s.label + " @ " + format_number(v) + ": " + w);
              break;
            }
            case Metric::Histogram: break;
          }
        }
        if (mc) {
          const std::string key = detail::sim_key(setup);
          if (key != cached_key) {
            switch (c.metric) {
              case Metric::Cop: samples = simulate_dest_sir(setup.params, plan, sim); break;
              case Metric::SopSingle: samples = simulate_eve_sir(setup.params, setup.eve, plan, sim); break;
              case Metric::SopMulti: samples = simulate_max_eve_sir(setup.params, plan, sim); break;
              case Metric::Histogram: break;
            }
            cached_key = key;
          }
          const OutageEstimate e = c.metric == Metric::Cop ? fraction_below(samples, {setup.beta}).front()
                                                           : fraction_above(samples, {setup.beta_e}).front();
          row.mc = e.value;
          row.mc_ci = e.ci_half_width;
        }
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& e) {
        throw NonConvergent("series '" + s.label + "', " + c.sweep_variable + " = " + format_number(v) + ": " +
                            e.what());
      }
      r.rows.push_back(row);
    }
  }
  return r;
}

}  // namespace socsec
