#pragma once

#include "respond/models.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace respond {

// Invalid configuration: unknown keys, malformed values, inapplicable settings.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  std::string var;  // delta | Tbar | dT | g | epsilon
  double lo = 0.0;
  double hi = 0.0;
  int n = 0;

  std::vector<double> values() const;
};

// "var:lo:hi:n"; ConfigError on malformed specs or an empty range (n < 1 or lo > hi).
SweepSpec parse_sweep(const std::string& spec);

struct RunConfig {
  std::string scenario;  // oscillator | qubit
  std::string preset;    // empty selects the scenario default
  std::string task;      // response | heat | entropy | sweep
  std::optional<SweepSpec> sweep;
  std::map<std::string, double> params;  // overrides: Ta, Tb, Tbar, dT, delta, g, epsilon, omega, Omega, ...
  std::optional<double> dt;
  std::optional<double> tmax;
  int npoints = 0;  // 0 selects the task default
  int workers = 1;
};

// Flat "key = value" lines; '#' starts a comment. Keys: preset, task, sweep, dt, tmax, npoints, workers and
// any parameter name. ConfigError on malformed lines.
std::map<std::string, std::string> read_config_file(const std::string& path);
// Applies entries to cfg, replacing earlier values; command-line flags are applied afterwards.
void apply_config_entries(RunConfig& cfg, const std::map<std::string, std::string>& entries);

std::vector<std::string> parameter_names(const std::string& scenario);
OscillatorParams resolve_oscillator(const RunConfig& cfg);
QubitParams resolve_qubit(const RunConfig& cfg);
// Sets one named parameter; Tbar and dT = Ta - Tb move both temperatures.
void set_parameter(OscillatorParams& p, const std::string& name, double value);
void set_parameter(QubitParams& p, const std::string& name, double value);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Validates the configuration (ConfigError) and evaluates the task (Error on numerical failure).
// Sweep points run on cfg.workers threads; rows are ordered by sweep index.
CsvTable run_scenario(const RunConfig& cfg);

// 17 significant digits, '.' decimal point, ',' separator, LF line endings; -0 is written as 0.
void write_csv(std::ostream& out, const CsvTable& table);

}  // namespace respond
