// socsec: reproduce the outage figures as CSV.
//
//   socsec presets
//   socsec validate --preset fig4
//   socsec run --preset fig4 --trials 20000 --output fig4.csv
//   socsec run --config my.json --mode closed

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "socsec/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Overrides {
  std::string preset;
  std::string config;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::string output;
  std::string mode;
  std::string variable;
  std::string beta;
  std::string beta_e;
  std::optional<double> eve_angle_deg;
  std::optional<double> eve_distance;
  std::optional<std::size_t> K;
  std::string jammer_domain;
  bool nja = false;
  bool paper_nu_tz = false;
  bool printed_ty = false;
  bool relay_sampling = false;
  bool trust_marks = false;
  bool phase_simulation = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--preset", o.preset, "built-in figure preset (see `socsec presets`)");
  cmd->add_option("--config", o.config, "JSON experiment config; flags override its values");
  cmd->add_option("--trials", o.trials, "Monte Carlo trials per grid point");
  cmd->add_option("--seed", o.seed, "base seed of the per-trial random streams");
  cmd->add_option("--workers", o.workers, "worker threads (0 = all cores); never changes results");
  cmd->add_option("--output", o.output, "CSV path (default: stdout)");
  cmd->add_option("--mode", o.mode, "closed | mc | both");
  cmd->add_option("--variable", o.variable, "histogram variable: Ty | Iy | Tz | Iz");
  cmd->add_option("--beta", o.beta, "destination threshold, e.g. -19dB or 0.0126");
  cmd->add_option("--beta-e", o.beta_e, "eavesdropper threshold, e.g. 0dB");
  cmd->add_option("--eve-angle", o.eve_angle_deg, "eavesdropper angle from the source-destination axis, degrees");
  cmd->add_option("--eve-distance", o.eve_distance, "eavesdropper distance |z| from the source, meters");
  cmd->add_option("--K", o.K, "relay-count truncation of the multi-eavesdropper bound");
  cmd->add_option("--jammer-domain", o.jammer_domain, "flabellate | exact");
  cmd->add_flag("--nja", o.nja, "no jammer assistance (c2 = c1) for every series");
  cmd->add_flag("--paper-nu-tz", o.paper_nu_tz, "use the printed eavesdropper-signal shape formula");
  cmd->add_flag("--printed-ty", o.printed_ty, "use the printed destination-signal Gamma fit");
  cmd->add_flag("--relay-sampling", o.relay_sampling, "sample relay positions in the multi-eavesdropper bound");
  cmd->add_flag("--trust-marks", o.trust_marks, "simulate categorization by explicit trust marks");
  cmd->add_flag("--phase-simulation", o.phase_simulation, "simulate eavesdropper leakage with explicit channels");
}

socsec::ExperimentConfig build_config(const Overrides& o) {
  using namespace socsec;
  if (o.preset.empty() && o.config.empty()) throw ConfigError("give --preset or --config");
  ExperimentConfig c = o.preset.empty() ? ExperimentConfig{} : preset_config(o.preset);
  if (!o.config.empty()) c = load_config_file(o.config, c);
  if (o.trials) c.trials = *o.trials;
  if (o.seed) c.seed = *o.seed;
  if (o.workers) c.workers = *o.workers;
  if (!o.output.empty()) c.output_path = o.output;
  if (!o.mode.empty()) c.mode = parse_mode(o.mode);
  if (!o.variable.empty()) c.variable = parse_variable(o.variable);
  if (!o.beta.empty()) c.beta = parse_threshold(o.beta);
  if (!o.beta_e.empty()) c.beta_e = parse_threshold(o.beta_e);
  if (o.eve_angle_deg) c.eve_angle = *o.eve_angle_deg * std::numbers::pi / 180.0;
  if (o.eve_distance) c.eve_distance = *o.eve_distance;
  if (o.K) c.K = *o.K;
  if (!o.jammer_domain.empty()) {
    if (o.jammer_domain == "exact") c.flags.exact_jammer_domain = true;
    else if (o.jammer_domain == "flabellate") c.flags.exact_jammer_domain = false;
    else throw ConfigError("unknown jammer domain '" + o.jammer_domain + "'");
  }
  c.flags.nja |= o.nja;
  c.flags.paper_nu_tz |= o.paper_nu_tz;
  c.flags.printed_ty |= o.printed_ty;
  c.flags.relay_sampling_mode |= o.relay_sampling;
  c.flags.trust_marks |= o.trust_marks;
  c.flags.phase_simulation |= o.phase_simulation;
  validate(c);
  return c;
}

int do_run(const Overrides& o) {
  const socsec::ExperimentConfig c = build_config(o);
  const socsec::RunResult r = socsec::run(c);
  std::ostream* notes = &std::cout;
  if (c.output_path.empty()) {
    socsec::write_csv(std::cout, c, r);
    notes = &std::cerr;
  } else {
    std::ofstream out(c.output_path, std::ios::binary);
    if (!out) throw socsec::ConfigError("cannot write '" + c.output_path + "'");
    socsec::write_csv(out, c, r);
    *notes << "wrote " << r.rows.size() << " rows to " << c.output_path << '\n';
  }
  for (const std::string& line : r.summary) *notes << line << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-form and Monte Carlo outage analysis of trust-based beamforming with cooperative jamming"};
  app.require_subcommand(1);
  Overrides run_opts;
  Overrides validate_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "run an experiment and write CSV");
  add_common(run_cmd, run_opts);
  CLI::App* validate_cmd = app.add_subcommand("validate", "check a preset or config without running it");
  add_common(validate_cmd, validate_opts);
  CLI::App* presets_cmd = app.add_subcommand("presets", "list the built-in figure presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (presets_cmd->parsed()) {
      for (const socsec::Preset& p : socsec::presets()) std::cout << p.name << '\t' << p.description << '\n';
      return kExitOk;
    }
    if (validate_cmd->parsed()) {
      const socsec::ExperimentConfig c = build_config(validate_opts);
      std::cout << "ok: " << c.name << " (" << socsec::to_string(c.metric) << ", " << c.grid.size()
                << " grid points, " << c.series.size() << " series)\n";
      return kExitOk;
    }
    return do_run(run_opts);
  } catch (const socsec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const socsec::GeometryError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const socsec::Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
