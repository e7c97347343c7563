#include "doctest.h"

#include "respond/models.hpp"
#include "respond/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

using namespace respond;

namespace {

RunConfig config(const std::string& scenario, const std::string& task) {
  RunConfig c;
  c.scenario = scenario;
  c.task = task;
  return c;
}

std::string csv(const CsvTable& t) {
  std::ostringstream out;
  write_csv(out, t);
  return out.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("sweep specification") {
  const SweepSpec s = parse_sweep("delta:0:0.5:6");
  CHECK(s.var == "delta");
  const std::vector<double> v = s.values();
  REQUIRE(v.size() == 6);
  CHECK(v.front() == 0.0);
  CHECK(v.back() == 0.5);
  CHECK(v[1] == doctest::Approx(0.1));
  CHECK(parse_sweep("Tbar:3:3:1").values() == std::vector<double>{3.0});
  CHECK_THROWS_AS(parse_sweep("delta:1:0:5"), ConfigError);
  CHECK_THROWS_AS(parse_sweep("delta:0:1:0"), ConfigError);
  CHECK_THROWS_AS(parse_sweep("delta:0:1"), ConfigError);
  CHECK_THROWS_AS(parse_sweep("omega:0:1:3"), ConfigError);
  CHECK_THROWS_AS(parse_sweep("delta:a:1:3"), ConfigError);
  CHECK_THROWS_AS(parse_sweep("delta:0:1:2.5"), ConfigError);
}

TEST_CASE("config file and overrides") {
  const std::string path = "respond_cli_test.cfg";
  {
    std::ofstream f(path);
    f << "# comment\npreset = fig4-high-T\n task = heat \nTa = 5100 # inline\ndelta=0.1\nworkers = 2\n";
  }
  RunConfig c = config("qubit", "entropy");
  apply_config_entries(c, read_config_file(path));
  CHECK(c.preset == "fig4-high-T");
  CHECK(c.task == "heat");
  CHECK(c.workers == 2);
  CHECK(c.params.at("Ta") == 5100.0);
  apply_config_entries(c, {{"Ta", "5200"}});
  const QubitParams p = resolve_qubit(c);
  CHECK(p.Ta == 5200.0);
  CHECK(p.Tb == 4990.0);
  CHECK(p.delta == 0.1);
  {
    std::ofstream f(path);
    f << "Ta 5\n";
  }
  CHECK_THROWS_AS(read_config_file(path), ConfigError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_config_file("does/not/exist.cfg"), ConfigError);
  RunConfig bad = config("qubit", "heat");
  CHECK_THROWS_AS(apply_config_entries(bad, {{"Ta", "warm"}}), ConfigError);
  CHECK_THROWS_AS(apply_config_entries(bad, {{"npoints", "2.5"}}), ConfigError);
}

TEST_CASE("temperature parameters") {
  QubitParams p;
  set_parameter(p, "Tbar", 100.0);
  CHECK(p.Ta == 110.0);
  CHECK(p.Tb == 90.0);
  set_parameter(p, "dT", 4.0);
  CHECK(p.Ta == 102.0);
  CHECK(p.Tb == 98.0);
  RunConfig c = config("qubit", "heat");
  c.params = {{"dT", 10.0}, {"Ta", 1.0}, {"Tb", 3.0}, {"Tbar", 500.0}};
  const QubitParams r = resolve_qubit(c);
  CHECK(r.Ta == 505.0);
  CHECK(r.Tb == 495.0);
  CHECK_THROWS_AS(set_parameter(p, "epsilon", 1.0), ConfigError);
  OscillatorParams o;
  set_parameter(o, "nmax", 6.0);
  CHECK(o.nmax_plus == 6);
  CHECK(o.nmax_minus == 6);
  CHECK_THROWS_AS(set_parameter(o, "nmax", 6.5), ConfigError);
}

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS(run_scenario(config("pendulum", "heat")), ConfigError);
  CHECK_THROWS_AS(run_scenario(config("qubit", "response")), ConfigError);
  CHECK_THROWS_AS(run_scenario(config("oscillator", "sweep")), ConfigError);
  RunConfig c = config("qubit", "entropy");
  c.sweep = parse_sweep("delta:0:1:3");
  CHECK_THROWS_AS(run_scenario(c), ConfigError);
  RunConfig d = config("qubit", "heat");
  d.params["Omgea"] = 1.0;
  CHECK_THROWS_AS(run_scenario(d), ConfigError);
  RunConfig e = config("qubit", "heat");
  e.params["g"] = 5000.0;
  CHECK_THROWS_AS(run_scenario(e), ConfigError);
  RunConfig f = config("qubit", "heat");
  f.preset = "fig7";
  CHECK_THROWS_AS(run_scenario(f), ConfigError);
  RunConfig g = config("qubit", "heat");
  g.workers = 0;
  CHECK_THROWS_AS(run_scenario(g), ConfigError);
}

TEST_CASE("numerical failures surface as library errors") {
  RunConfig c = config("oscillator", "heat");
  c.params = {{"Ta", 40.0}, {"Tb", 40.0}};
  try {
    run_scenario(c);
    FAIL("expected TruncationTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TruncationTooSmall);
    CHECK(e.operation() == "build_oscillator_scenario");
  }
}

TEST_CASE("equal temperatures carry no current") {
  RunConfig c = config("qubit", "heat");
  c.params = {{"Ta", 100.0}, {"Tb", 100.0}};
  const CsvTable t = run_scenario(c);
  CHECK(t.header == std::vector<std::string>{"var", "J0", "J1_local", "J_global"});
  REQUIRE(t.rows.size() == 1);
  for (std::size_t k = 1; k < 4; ++k) CHECK(std::abs(t.rows[0][k]) < 1e-10);
}

TEST_CASE("qubit delta sweep reproduces the reference curves") {
  RunConfig c = config("qubit", "heat");
  c.sweep = parse_sweep("delta:0:0.5:6");
  const CsvTable t = run_scenario(c);
  REQUIRE(t.rows.size() == 6);
  const QubitParams p;
  for (const auto& row : t.rows) {
    CHECK(row[1] == doctest::Approx(qubit_j0(p)).epsilon(1e-8));
    CHECK(row[2] == doctest::Approx(row[0] * qubit_j1(p)).epsilon(1e-6));
  }
  CHECK(t.rows[0][3] == doctest::Approx(qubit_j0(p)).epsilon(1e-8));
}

TEST_CASE("rows are independent of the worker count") {
  RunConfig c = config("qubit", "heat");
  c.sweep = parse_sweep("Tbar:60:200:5");
  c.workers = 1;
  const std::string one = csv(run_scenario(c));
  c.workers = 3;
  CHECK(csv(run_scenario(c)) == one);
  CHECK(csv(run_scenario(c)) == one);
}

TEST_CASE("CSV formatting") {
  CsvTable t{{"a", "b"}, {{0.1, -2.5e-300}, {1.0 / 3.0, 12345678.0}}};
  CHECK(csv(t) == "a,b\n0.10000000000000001,-2.5e-300\n0.33333333333333331,12345678\n");
}

TEST_CASE("oscillator analytic sweep") {
  RunConfig c = config("oscillator", "sweep");
  c.preset = "fig2";
  c.sweep = parse_sweep("Tbar:1000:100000:3");
  const CsvTable t = run_scenario(c);
  CHECK(t.header == std::vector<std::string>{"var", "Phi11_inf", "Phi12_inf", "response"});
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows.front()[3] < 0.0);
  CHECK(t.rows.back()[3] > 0.0);
  for (const auto& r : t.rows) CHECK(r[3] == doctest::Approx(0.02 * (r[1] + r[2])).epsilon(1e-14));
}

TEST_CASE("entropy task") {
  RunConfig c = config("qubit", "entropy");
  c.params = {{"Ta", 600.0}, {"Tb", 400.0}};
  c.tmax = 2.0;
  c.npoints = 21;
  const CsvTable t = run_scenario(c);
  CHECK(t.header == std::vector<std::string>{"t", "S", "dS_dt", "sigma", "J_a", "J_b"});
  REQUIRE(t.rows.size() == 21);
  CHECK(t.rows[0][1] == doctest::Approx(0.0).epsilon(1e-12));
  for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i][3] >= -1e-8);
}

TEST_CASE("response task converges to the steady responses") {
  RunConfig c = config("oscillator", "response");
  c.params = {{"nmax_plus", 4.0}, {"nmax_minus", 8.0}};
  const CsvTable t = run_scenario(c);
  CHECK(t.header == std::vector<std::string>{"tau", "phi11", "phi12", "phi_total", "Phi11", "Phi12"});
  OscillatorParams p = oscillator_preset("fig2-deskscale");
  const auto& last = t.rows.back();
  CHECK(last[4] == doctest::Approx(oscillator_Phi11_inf(p)).epsilon(1e-3));
  CHECK(last[5] == doctest::Approx(oscillator_Phi12_inf_closure(p)).epsilon(1e-3));
}

}  // TEST_SUITE
