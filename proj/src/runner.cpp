#include "respond/runner.hpp"

#include "respond/response.hpp"
#include "respond/thermo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <locale>
#include <ostream>
#include <sstream>
#include <thread>

namespace respond {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  std::istringstream in(trim(text));
  in.imbue(std::locale::classic());
  double v = 0.0;
  if (!(in >> v) || !in.eof() || !std::isfinite(v)) throw ConfigError(what + ": expected a finite number, got '" + text + "'");
  return v;
}

int parse_int(const std::string& text, const std::string& what) {
  const double v = parse_double(text, what);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(what + ": expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

bool contains(const std::vector<std::string>& xs, const std::string& x) {
  return std::find(xs.begin(), xs.end(), x) != xs.end();
}

const std::vector<std::string> kSweepVars{"delta", "Tbar", "dT", "g", "epsilon"};

void set_temperatures(double& ta, double& tb, const std::string& name, double value) {
  const double mean = 0.5 * (ta + tb);
  const double diff = ta - tb;
  if (name == "Ta") ta = value;
  else if (name == "Tb") tb = value;
  else if (name == "Tbar") {
    ta = value + 0.5 * diff;
    tb = value - 0.5 * diff;
  } else if (name == "dT") {
    ta = mean + 0.5 * value;
    tb = mean - 0.5 * value;
  }
}

template <class Params>
void apply_parameters(Params& p, const std::map<std::string, double>& params) {
  // Tbar and dT act on the temperatures set by everything else.
  for (const auto& [k, v] : params)
    if (k != "Tbar" && k != "dT") set_parameter(p, k, v);
  for (const char* k : {"dT", "Tbar"}) {
    const auto it = params.find(k);
    if (it != params.end()) set_parameter(p, k, it->second);
  }
}

template <class Params>
Params validated(Params p) {
  try {
    p.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return p;
}

std::vector<double> task_grid(const RunConfig& cfg, double default_tmax, int default_n) {
  const double tmax = cfg.tmax.value_or(default_tmax);
  const int n = cfg.npoints > 0 ? cfg.npoints : default_n;
  return uniform_grid(tmax, static_cast<std::size_t>(n));
}

template <class Fn>
std::vector<std::vector<double>> parallel_rows(const std::vector<double>& values, int workers, const Fn& row) {
  std::vector<std::vector<double>> rows(values.size());
  std::vector<std::exception_ptr> errors(values.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < values.size(); i = next++) {
      try {
        rows[i] = row(values[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(workers, static_cast<int>(values.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

Matrix ground_projector(const Matrix& h) {
  const EigenSystem eig = eigendecompose_hermitian(h);
  const Vector g = eig.vectors.col(0);
  return g * g.adjoint();
}

CsvTable entropy_table(const Liouvillian& l, const Matrix& h, const RunConfig& cfg) {
  const std::vector<double> times = task_grid(cfg, 10.0, 101);
  const Propagator prop(l, Picture::Schrodinger, cfg.dt.value_or(0.0));
  const std::vector<Matrix> states = prop.trajectory(ground_projector(h), times);
  CsvTable t{{"t", "S", "dS_dt", "sigma", "J_a", "J_b"}, {}};
  for (std::size_t i = 0; i < times.size(); ++i) {
    const ThermoSnapshot s = entropy_production(l, normalized_state(states[i]).matrix(), h, times[i]);
    t.rows.push_back({times[i], s.entropy, s.entropy_rate, s.entropy_production, s.heat_currents.at("a"),
                      s.heat_currents.at("b")});
  }
  return t;
}

// J0, delta J1 (local) and the global current from bath a.
std::vector<double> heat_row(double var, const Matrix& h0, const Matrix& v, double delta,
                             const std::vector<BathSpec>& baths, const Liouvillian& l0) {
  const DensityMatrix pi0 = steady_state(l0);
  const double j0 = heat_current(l0, "a", h0, pi0.matrix());
  const double j1 = heat_current_local_first_order(l0, v, pi0.matrix(), "a");
  BuildOptions opts;
  opts.zero_frequency = ZeroFrequencyPolicy::Drop;
  const Liouvillian lg = build_global_perturbed(h0, v, delta, baths, opts);
  const DensityMatrix ness = steady_state(lg);
  const double jg = heat_current(lg, "a", lg.hamiltonian(), ness.matrix());
  return {var, j0, delta * j1, jg};
}

CsvTable run_oscillator(const RunConfig& cfg) {
  const OscillatorParams base = resolve_oscillator(cfg);
  if (cfg.task == "response") {
    const OscillatorScenario s = build_oscillator_scenario(base);
    const DensityMatrix pi0 = steady_state(s.l0);
    std::vector<double> grid;
    if (cfg.tmax) {
      grid = task_grid(cfg, *cfg.tmax, 4000);
    } else {
      const double kappa = 0.5 * std::min(base.gamma_minus, base.gamma_plus);
      grid = default_tau_grid(kappa, cfg.npoints > 0 ? static_cast<std::size_t>(cfg.npoints) : 4000);
    }
    const ResponseTrace tr = response_function(s.ops.ada, s.l0, s.l1, pi0.matrix(), grid, cfg.dt.value_or(0.0));
    const std::vector<double> c11 = cumulative_simpson(tr.tau, tr.phi11);
    const std::vector<double> c12 = cumulative_simpson(tr.tau, tr.phi12);
    CsvTable t{{"tau", "phi11", "phi12", "phi_total", "Phi11", "Phi12"}, {}};
    for (std::size_t i = 0; i < tr.tau.size(); ++i)
      t.rows.push_back({tr.tau[i], tr.phi11[i], tr.phi12[i], tr.phi_total[i], c11[i], c12[i]});
    return t;
  }
  if (cfg.task == "entropy") {
    const OscillatorScenario s = build_oscillator_scenario(base);
    return entropy_table(s.l0, s.h0, cfg);
  }
  const std::vector<double> values = cfg.sweep ? cfg.sweep->values() : std::vector<double>{base.delta};
  const std::string var = cfg.sweep ? cfg.sweep->var : "delta";
  if (cfg.task == "heat") {
    CsvTable t{{"var", "J0", "J1_local", "J_global"}, {}};
    t.rows = parallel_rows(values, cfg.workers, [&](double x) {
      OscillatorParams p = base;
      set_parameter(p, var, x);
      const OscillatorScenario s = build_oscillator_scenario(validated(p));
      return heat_row(x, s.h0, s.v, p.delta, s.baths, s.l0);
    });
    return t;
  }
  CsvTable t{{"var", "Phi11_inf", "Phi12_inf", "response"}, {}};
  t.rows = parallel_rows(values, cfg.workers, [&](double x) {
    OscillatorParams p = base;
    set_parameter(p, var, x);
    p = validated(p);
    const double a = oscillator_Phi11_inf(p);
    const double b = oscillator_Phi12_inf(p);
    return std::vector<double>{x, a, b, p.delta * (a + b)};
  });
  return t;
}

CsvTable run_qubit(const RunConfig& cfg) {
  const QubitParams base = resolve_qubit(cfg);
  if (cfg.task == "entropy") {
    const QubitScenario s = build_qubit_scenario(base);
    return entropy_table(s.l0, s.h0, cfg);
  }
  const std::vector<double> values = cfg.sweep ? cfg.sweep->values() : std::vector<double>{base.delta};
  const std::string var = cfg.sweep ? cfg.sweep->var : "delta";
  CsvTable t{{"var", "J0", "J1_local", "J_global"}, {}};
  t.rows = parallel_rows(values, cfg.workers, [&](double x) {
    QubitParams p = base;
    set_parameter(p, var, x);
    const QubitScenario s = build_qubit_scenario(validated(p));
    return heat_row(x, s.h0, s.v, p.delta, s.baths, s.l0);
  });
  return t;
}

void validate_config(const RunConfig& cfg) {
  if (cfg.scenario != "oscillator" && cfg.scenario != "qubit")
    throw ConfigError("scenario must be 'oscillator' or 'qubit'");
  const std::vector<std::string> tasks = cfg.scenario == "oscillator"
                                             ? std::vector<std::string>{"response", "heat", "entropy", "sweep"}
                                             : std::vector<std::string>{"heat", "entropy"};
  if (!contains(tasks, cfg.task)) {
    std::string list;
    for (const auto& t : tasks) list += (list.empty() ? "" : ", ") + t;
    throw ConfigError("task '" + cfg.task + "' is not available for " + cfg.scenario + " (choose " + list + ")");
  }
  if (cfg.sweep && cfg.task != "heat" && cfg.task != "sweep")
    throw ConfigError("--sweep applies to the heat and sweep tasks");
  if (cfg.task == "sweep" && !cfg.sweep) throw ConfigError("task 'sweep' needs --sweep var:lo:hi:n");
  if (cfg.sweep && cfg.sweep->var == "epsilon" && cfg.scenario == "qubit")
    throw ConfigError("epsilon is not a qubit parameter");
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  if (cfg.npoints < 0 || cfg.npoints == 1) throw ConfigError("npoints must be >= 2");
  if (cfg.dt && !(*cfg.dt > 0.0)) throw ConfigError("dt must be > 0");
  if (cfg.tmax && !(*cfg.tmax > 0.0)) throw ConfigError("tmax must be > 0");
  const std::vector<std::string> names = parameter_names(cfg.scenario);
  for (const auto& [k, v] : cfg.params) {
    if (!contains(names, k)) throw ConfigError("unknown " + cfg.scenario + " parameter '" + k + "'");
    if (!std::isfinite(v)) throw ConfigError("parameter '" + k + "' must be finite");
  }
}

}  // namespace

std::vector<double> SweepSpec::values() const {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return out;
}

SweepSpec parse_sweep(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream in(spec);
  for (std::string item; std::getline(in, item, ':');) parts.push_back(item);
  if (parts.size() != 4) throw ConfigError("sweep must look like var:lo:hi:n, got '" + spec + "'");
  SweepSpec s;
  s.var = trim(parts[0]);
  if (!contains(kSweepVars, s.var)) throw ConfigError("sweep variable must be one of delta, Tbar, dT, g, epsilon");
  s.lo = parse_double(parts[1], "sweep lower bound");
  s.hi = parse_double(parts[2], "sweep upper bound");
  s.n = parse_int(parts[3], "sweep point count");
  if (s.n < 1 || s.lo > s.hi) throw ConfigError("sweep range '" + spec + "' is empty");
  return s;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> out;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(path + ":" + std::to_string(line_no) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_config_entries(RunConfig& cfg, const std::map<std::string, std::string>& entries) {
  for (const auto& [key, value] : entries) {
    if (key == "scenario") cfg.scenario = value;
    else if (key == "preset") cfg.preset = value;
    else if (key == "task") cfg.task = value;
    else if (key == "sweep") cfg.sweep = parse_sweep(value);
    else if (key == "dt") cfg.dt = parse_double(value, key);
    else if (key == "tmax") cfg.tmax = parse_double(value, key);
    else if (key == "npoints") cfg.npoints = parse_int(value, key);
    else if (key == "workers") cfg.workers = parse_int(value, key);
    else cfg.params[key] = parse_double(value, key);
  }
}

std::vector<std::string> parameter_names(const std::string& scenario) {
  if (scenario == "oscillator") {
    return {"omega", "g", "epsilon", "gamma_plus", "gamma_minus", "Ta", "Tb", "Tbar", "dT", "delta",
            "nmax", "nmax_plus", "nmax_minus"};
  }
  return {"omega", "g", "gamma_plus", "gamma_minus", "Omega", "Ta", "Tb", "Tbar", "dT", "delta"};
}

void set_parameter(OscillatorParams& p, const std::string& name, double value) {
  auto as_levels = [&] {
    if (value != std::floor(value) || value < 1 || value > 1000) throw ConfigError(name + " must be an integer");
    return static_cast<int>(value);
  };
  if (name == "omega") p.omega = value;
  else if (name == "g") p.g = value;
  else if (name == "epsilon") p.epsilon = value;
  else if (name == "gamma_plus") p.gamma_plus = value;
  else if (name == "gamma_minus") p.gamma_minus = value;
  else if (name == "delta") p.delta = value;
  else if (name == "nmax") p.nmax_plus = p.nmax_minus = as_levels();
  else if (name == "nmax_plus") p.nmax_plus = as_levels();
  else if (name == "nmax_minus") p.nmax_minus = as_levels();
  else if (name == "Ta" || name == "Tb" || name == "Tbar" || name == "dT") set_temperatures(p.Ta, p.Tb, name, value);
  else throw ConfigError("unknown oscillator parameter '" + name + "'");
}

void set_parameter(QubitParams& p, const std::string& name, double value) {
  if (name == "omega") p.omega = value;
  else if (name == "g") p.g = value;
  else if (name == "gamma_plus") p.gamma_plus = value;
  else if (name == "gamma_minus") p.gamma_minus = value;
  else if (name == "Omega") p.Omega = value;
  else if (name == "delta") p.delta = value;
  else if (name == "Ta" || name == "Tb" || name == "Tbar" || name == "dT") set_temperatures(p.Ta, p.Tb, name, value);
  else throw ConfigError("unknown qubit parameter '" + name + "'");
}

OscillatorParams resolve_oscillator(const RunConfig& cfg) {
  OscillatorParams p;
  try {
    p = oscillator_preset(cfg.preset.empty() ? "fig2-deskscale" : cfg.preset);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  apply_parameters(p, cfg.params);
  return validated(p);
}

QubitParams resolve_qubit(const RunConfig& cfg) {
  QubitParams p;
  try {
    p = qubit_preset(cfg.preset.empty() ? "fig4-low-T" : cfg.preset);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  apply_parameters(p, cfg.params);
  return validated(p);
}

CsvTable run_scenario(const RunConfig& cfg) {
  validate_config(cfg);
  return cfg.scenario == "oscillator" ? run_oscillator(cfg) : run_qubit(cfg);
}

void write_csv(std::ostream& out, const CsvTable& table) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(17);
  for (std::size_t i = 0; i < table.header.size(); ++i) s << (i ? "," : "") << table.header[i];
  s << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s << (i ? "," : "") << (row[i] == 0.0 ? 0.0 : row[i]);
    s << '\n';
  }
  out << s.str();
}

}  // namespace respond
