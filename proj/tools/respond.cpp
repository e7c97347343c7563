#include "respond/runner.hpp"
#include "respond/verify.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitVerify = 1;

struct ScenarioFlags {
  std::string config_path;
  std::string preset;
  std::string task;
  std::string sweep;
  std::string out;
  std::vector<std::string> sets;
  std::optional<double> dt, tmax, ta, tb, delta;
  std::optional<int> nmax, workers, npoints;
};

void add_scenario_flags(CLI::App* cmd, ScenarioFlags& f, const std::string& presets, const std::string& tasks) {
  cmd->add_option("--config", f.config_path, "flat 'key = value' file; flags override its entries");
  cmd->add_option("--preset", f.preset, "parameter preset: " + presets);
  cmd->add_option("--task", f.task, "task: " + tasks);
  cmd->add_option("--sweep", f.sweep, "sweep var:lo:hi:n with var in delta, Tbar, dT, g, epsilon");
  cmd->add_option("--out", f.out, "CSV output path (default: standard output)");
  cmd->add_option("--Ta", f.ta, "temperature of bath a");
  cmd->add_option("--Tb", f.tb, "temperature of bath b");
  cmd->add_option("--delta", f.delta, "perturbation strength");
  cmd->add_option("--set", f.sets, "parameter override key=value (repeatable)");
  cmd->add_option("--dt", f.dt, "RK4 step (default: 0.1 / ||L||)");
  cmd->add_option("--tmax", f.tmax, "end of the time grid");
  cmd->add_option("--npoints", f.npoints, "number of time-grid points");
  cmd->add_option("--workers", f.workers, "threads for sweep points");
}

respond::RunConfig build_config(const std::string& scenario, const ScenarioFlags& f) {
  respond::RunConfig cfg;
  cfg.scenario = scenario;
  cfg.task = scenario == "oscillator" ? "response" : "heat";
  if (!f.config_path.empty()) respond::apply_config_entries(cfg, respond::read_config_file(f.config_path));
  cfg.scenario = scenario;
  if (!f.preset.empty()) cfg.preset = f.preset;
  if (!f.task.empty()) cfg.task = f.task;
  if (!f.sweep.empty()) cfg.sweep = respond::parse_sweep(f.sweep);
  std::map<std::string, std::string> sets;
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw respond::ConfigError("--set expects key=value, got '" + s + "'");
    sets[s.substr(0, eq)] = s.substr(eq + 1);
  }
  respond::apply_config_entries(cfg, sets);
  if (f.ta) cfg.params["Ta"] = *f.ta;
  if (f.tb) cfg.params["Tb"] = *f.tb;
  if (f.delta) cfg.params["delta"] = *f.delta;
  if (f.nmax) cfg.params["nmax"] = *f.nmax;
  if (f.dt) cfg.dt = *f.dt;
  if (f.tmax) cfg.tmax = *f.tmax;
  if (f.npoints) cfg.npoints = *f.npoints;
  if (f.workers) cfg.workers = *f.workers;
  return cfg;
}

int run(const std::string& scenario, const ScenarioFlags& f) {
  try {
    const respond::RunConfig cfg = build_config(scenario, f);
    const respond::CsvTable table = respond::run_scenario(cfg);
    if (f.out.empty()) {
      respond::write_csv(std::cout, table);
    } else {
      std::ofstream out(f.out, std::ios::binary);
      if (!out) throw respond::ConfigError("cannot write '" + f.out + "'");
      respond::write_csv(out, table);
    }
    return 0;
  } catch (const respond::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const respond::Error& e) {
    std::cerr << "numerical failure in " << e.operation() << ": " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Response of open quantum systems to Hamiltonian perturbations.\n"
      "Units: hbar = k_B = gamma = 1; energies, rates and temperatures are in units of the reference rate gamma."};
  app.require_subcommand(1);

  ScenarioFlags osc, qub;
  CLI::App* osc_cmd = app.add_subcommand("oscillator", "two coupled oscillators with a cubic perturbation");
  add_scenario_flags(osc_cmd, osc, "fig2, fig3, fig2-deskscale (default)", "response (default), heat, entropy, sweep");
  osc_cmd->add_option("--nmax", osc.nmax, "Fock levels kept per normal mode");
  CLI::App* qub_cmd = app.add_subcommand("qubit", "two coupled qubits with a sigma_z sigma_z perturbation");
  add_scenario_flags(qub_cmd, qub, "fig4-low-T (default), fig4-high-T", "heat (default), entropy");

  std::string suite = "all";
  CLI::App* verify_cmd = app.add_subcommand("verify", "run the verification suites");
  verify_cmd->add_option("--suite", suite, "all | core | qubit | oscillator | thermo");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*osc_cmd) return run("oscillator", osc);
  if (*qub_cmd) return run("qubit", qub);

  std::vector<respond::CriterionResult> results;
  try {
    results = respond::run_suite(suite);
  } catch (const respond::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  bool all = true;
  for (const auto& r : results) {
    respond::print_result(std::cout, r);
    all = all && r.passed;
  }
  std::cout << (all ? "all checks passed" : "some checks failed") << "\n";
  return all ? 0 : kExitVerify;
}
