#include "doctest.h"

#include "respond/models.hpp"
#include "respond/response.hpp"
#include "respond/thermo.hpp"

#include <cmath>
#include <random>

using namespace respond;

namespace {

template <class Fn>
ErrorCode error_code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidArgument;
}

Matrix sigma_z() {
  Matrix m(2, 2);
  m << -1, 0, 0, 1;
  return m;
}
Matrix sigma_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Liouvillian thermal_qubit(double temperature) {
  return build_liouvillian(0.5 * sigma_z(), {{"bath", sigma_x(), temperature, flat_rate(1.0)}});
}

QubitParams warm_qubit() {
  QubitParams p;
  p.Ta = 600.0;
  p.Tb = 400.0;
  return p;
}

OscillatorParams warm_oscillator() {
  OscillatorParams p;
  p.nmax_plus = p.nmax_minus = 5;
  p.Ta = 4.0;
  p.Tb = 5.0;
  return p;
}

}  // namespace

TEST_SUITE("thermo") {

TEST_CASE("von Neumann entropy") {
  Vector psi = Vector::Zero(3);
  psi(1) = 1.0;
  CHECK(std::abs(von_neumann_entropy(pure_state(psi).matrix())) < 1e-15);
  CHECK(von_neumann_entropy(maximally_mixed(4).matrix()) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  CHECK(von_neumann_entropy(maximally_mixed(4).matrix()) == doctest::Approx(1.3863).epsilon(1e-4));
  Matrix r = Matrix::Zero(2, 2);
  r(0, 0) = 0.75;
  r(1, 1) = 0.25;
  CHECK(von_neumann_entropy(r) == doctest::Approx(-0.75 * std::log(0.75) - 0.25 * std::log(0.25)).epsilon(1e-14));
  CHECK(von_neumann_entropy(r) == doctest::Approx(0.5623).epsilon(1e-4));
}

TEST_CASE("entropy bounds on random states") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const double s = von_neumann_entropy(random_density_matrix(5, rng).matrix());
    CHECK(s >= 0.0);
    CHECK(s <= std::log(5.0) + 1e-12);
  }
}

TEST_CASE("heat current vanishes in equilibrium") {
  const Liouvillian l = thermal_qubit(0.9);
  const Matrix pi = gibbs_state(0.5 * sigma_z(), 0.9).matrix();
  CHECK(std::abs(heat_current(l, "bath", 0.5 * sigma_z(), pi)) < 1e-15);
  CHECK(error_code_of([&] { heat_current(l, "other", 0.5 * sigma_z(), pi); }) == ErrorCode::UnknownBath);
}

TEST_CASE("energy and entropy forms agree") {
  const QubitScenario s = build_qubit_scenario(warm_qubit());
  std::mt19937_64 rng(6);
  for (int k = 0; k < 10; ++k) {
    const Matrix rho = random_density_matrix(4, rng).matrix();
    for (const char* label : {"a", "b"}) {
      const HeatCurrentForms f = heat_current_forms(s.l0, label, s.h0, rho);
      REQUIRE(f.entropy_available);
      CHECK(f.entropy_form == doctest::Approx(f.energy_form).epsilon(1e-8));
    }
  }
}

TEST_CASE("zero temperature falls back to the energy form") {
  const Liouvillian l = thermal_qubit(0.0);
  const Matrix rho = maximally_mixed(2).matrix();
  const HeatCurrentForms f = heat_current_forms(l, "bath", 0.5 * sigma_z(), rho);
  CHECK_FALSE(f.entropy_available);
  CHECK(std::isnan(f.entropy_form));
  // gamma (n + 1) omega p_excited with n = 0: -1 * 1 * 0.5
  CHECK(f.energy_form == doctest::Approx(-0.5));
  CHECK(error_code_of([&] { entropy_production(l, rho, 0.5 * sigma_z()); }) == ErrorCode::ZeroTemperatureBath);
}

TEST_CASE("NESS entropy production") {
  const QubitScenario s = build_qubit_scenario(warm_qubit());
  const DensityMatrix pi = steady_state(s.l0);
  const ThermoSnapshot snap = entropy_production(s.l0, pi.matrix(), s.h0);
  const double ja = snap.heat_currents.at("a"), jb = snap.heat_currents.at("b");
  CHECK(std::abs(ja + jb) < 1e-8 * std::abs(ja));
  CHECK(std::abs(snap.entropy_rate) < 1e-8);
  CHECK(snap.entropy_production == doctest::Approx(-(ja / 600.0 + jb / 400.0)).epsilon(1e-6));
  CHECK(snap.entropy_production > 0.0);
}

TEST_CASE("equilibrium entropy production vanishes") {
  const Liouvillian l = thermal_qubit(0.7);
  const ThermoSnapshot snap = entropy_production(l, gibbs_state(0.5 * sigma_z(), 0.7).matrix(), 0.5 * sigma_z());
  CHECK(std::abs(snap.entropy_production) < 1e-9);
}

TEST_CASE("transient entropy production is nonnegative") {
  const QubitScenario s = build_qubit_scenario(warm_qubit());
  const Propagator prop(s.l0, Picture::Schrodinger);
  Matrix ground = Matrix::Zero(4, 4);
  ground(0, 0) = 1.0;
  const std::vector<double> times = uniform_grid(5.0, 100);
  const std::vector<Matrix> states = prop.trajectory(ground, times);
  for (std::size_t i = 1; i < times.size(); ++i) {
    const ThermoSnapshot snap = entropy_production(s.l0, normalized_state(states[i]).matrix(), s.h0, times[i]);
    CHECK(snap.entropy_production >= -1e-8);
  }
}

TEST_CASE("Spohn functional") {
  const Liouvillian l = thermal_qubit(0.8);
  const Matrix pi = steady_state(l).matrix();
  CHECK(std::abs(spohn_functional(l, pi, pi)) < 1e-12);
  std::mt19937_64 rng(19);
  for (int k = 0; k < 100; ++k) CHECK(spohn_functional(l, random_density_matrix(2, rng).matrix(), pi) >= -1e-8);
  CHECK(error_code_of([&] { spohn_functional(l, pi, maximally_mixed(2).matrix()); }) ==
        ErrorCode::NotStationaryReference);
}

TEST_CASE("Spohn functional decreases along relaxation") {
  const Liouvillian l = thermal_qubit(0.8);
  const Matrix pi = steady_state(l).matrix();
  Matrix rho = Matrix::Zero(2, 2);
  rho(1, 1) = 0.9;
  rho(0, 0) = 0.1;
  rho(0, 1) = rho(1, 0) = 0.2;
  const Propagator prop(l, Picture::Schrodinger);
  const std::vector<Matrix> states = prop.trajectory(rho, uniform_grid(10.0, 50));
  double previous = spohn_functional(l, states[0], pi);
  for (std::size_t i = 1; i < states.size(); ++i) {
    const double v = spohn_functional(l, states[i], pi);
    CHECK(v <= previous + 1e-12);
    CHECK(v >= -1e-10);
    previous = v;
  }
  CHECK(previous < 1e-6);
}

TEST_CASE("Spohn zero implies the reference state") {
  const Liouvillian l = thermal_qubit(0.8);
  const Matrix pi = steady_state(l).matrix();
  std::mt19937_64 rng(2);
  for (int k = 0; k < 50; ++k) {
    const Matrix rho = random_density_matrix(2, rng).matrix();
    const Matrix near = 0.999 * pi + 0.001 * rho;
    if (spohn_functional(l, near, pi) < 1e-10) CHECK((near - pi).norm() < 1e-5);
  }
}

TEST_CASE("first-order heat current forms") {
  const OscillatorScenario s = build_oscillator_scenario(warm_oscillator());
  const Matrix pi0 = steady_state(s.l0).matrix();
  for (const char* label : {"a", "b"}) {
    const FirstOrderHeat j = heat_current_first_order(s.l0, s.l1, pi0, label, kInfiniteTime);
    REQUIRE(j.entropy_available);
    CHECK(j.entropy_form == doctest::Approx(j.energy_form).epsilon(1e-7));
  }
  const double ja = heat_current_first_order(s.l0, s.l1, pi0, "a", kInfiniteTime).energy_form;
  const double jb = heat_current_first_order(s.l0, s.l1, pi0, "b", kInfiniteTime).energy_form;
  CHECK(std::abs(ja + jb) < 1e-8 * std::max(std::abs(ja), 1e-12));
}

TEST_CASE("first-order heat current vanishes without perturbation") {
  const QubitScenario s = build_qubit_scenario(warm_qubit());
  const FirstOrderGenerator l1 = build_first_order(s.h0, Matrix::Zero(4, 4), s.baths);
  const Matrix pi0 = steady_state(s.l0).matrix();
  CHECK(std::abs(heat_current_first_order(s.l0, l1, pi0, "a", kInfiniteTime).energy_form) < 1e-14);
}

TEST_CASE("first-order heat current matches the finite-difference oracle") {
  const OscillatorScenario s = build_oscillator_scenario(warm_oscillator());
  const Matrix pi0 = steady_state(s.l0).matrix();
  const double j1 = heat_current_first_order(s.l0, s.l1, pi0, "a", kInfiniteTime).energy_form;
  BuildOptions opts;
  opts.zero_frequency = ZeroFrequencyPolicy::Drop;
  opts.freq_cluster_tol = 0.05;
  const OracleResult r = finite_difference_oracle(
      [&](double d) { return build_global_perturbed(s.h0, s.v, d, s.baths, opts); },
      [](const Liouvillian& l, const DensityMatrix& rho) { return heat_current(l, "a", l.hamiltonian(), rho.matrix()); },
      {4e-3, 2e-3, 4e-4});
  CHECK(r.derivative == doctest::Approx(j1).epsilon(1e-4));
}

TEST_CASE("local first-order heat current matches the local oracle") {
  QubitParams p = warm_qubit();
  p.Omega = 1.0;
  const QubitScenario s = build_qubit_scenario(p);
  const Matrix pi0 = steady_state(s.l0).matrix();
  const double j1 = heat_current_local_first_order(s.l0, s.v, pi0, "a");
  const OracleResult r = finite_difference_oracle(
      [&](double d) { return build_local_perturbed(s.h0, s.v, d, s.baths); },
      [&](const Liouvillian& l, const DensityMatrix& rho) { return heat_current(l, "a", l.hamiltonian(), rho.matrix()); },
      {1e-2, 1e-3, 1e-4});
  CHECK(r.derivative == doctest::Approx(j1).epsilon(1e-6));
  CHECK(j1 == doctest::Approx(qubit_j1(p)).epsilon(1e-6));
}

TEST_CASE("first-order entropy vanishes by minus-mode parity on the oscillator") {
  const OscillatorScenario s = build_oscillator_scenario(warm_oscillator());
  const Matrix pi0 = steady_state(s.l0).matrix();
  const auto traj = entropy_first_order_trajectory(s.l0, s.l1, pi0, uniform_grid(2.0, 21));
  for (const auto& e : traj) {
    CHECK(std::abs(e.s1) < 1e-12);
    CHECK(std::abs(e.ds1_dt) < 1e-10);
  }
}

TEST_CASE("first-order entropy derivative") {
  QubitParams p;
  p.omega = 3.0;
  p.g = 1.0;
  p.Ta = 3.0;
  p.Tb = 2.0;
  const QubitScenario s = build_qubit_scenario(p);
  const EigenSystem eig = eigendecompose_hermitian(s.h0);
  // Random perturbation with its diagonal removed in the (nondegenerate) eigenbasis, so no level shifts.
  std::mt19937_64 rng(21);
  Matrix vt = eig.to_eigenbasis(random_hermitian(4, rng));
  vt.diagonal().setZero();
  const Matrix v = eig.from_eigenbasis(vt);
  const FirstOrderGenerator l1 = build_first_order(s.h0, v, s.baths);
  const Matrix pi0 = steady_state(s.l0).matrix();
  const std::vector<double> times = uniform_grid(4.0, 1601);
  const auto traj = entropy_first_order_trajectory(s.l0, l1, pi0, times, 1e-4);
  CHECK(std::abs(traj.front().s1) < 1e-15);
  // Fourth-order centered differences of S1 against the closed-form derivative.
  const double h = times[1] - times[0];
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 2; i + 2 < times.size(); ++i) {
    const double fd = (-traj[i + 2].s1 + 8.0 * traj[i + 1].s1 - 8.0 * traj[i - 1].s1 + traj[i - 2].s1) / (12.0 * h);
    worst = std::max(worst, std::abs(fd - traj[i].ds1_dt));
    scale = std::max(scale, std::abs(traj[i].ds1_dt));
  }
  CHECK(scale > 1e-3);
  CHECK(worst < 1e-6 * scale);
  const Matrix rho_inf = first_order_steady_state(s.l0, l1, pi0);
  CHECK(std::abs(entropy_first_order(s.l0, l1, pi0, rho_inf, kInfiniteTime).ds1_dt) < 1e-9);
}

TEST_CASE("single-bath first-order entropy production vanishes") {
  OscillatorParams p = warm_oscillator();
  p.Tb = p.Ta;
  const OscillatorScenario s = build_oscillator_scenario(p);
  const Matrix pi0 = steady_state(s.l0).matrix();
  for (const auto& e : entropy_first_order_trajectory(s.l0, s.l1, pi0, uniform_grid(5.0, 50)))
    CHECK(std::abs(e.sigma1) < 1e-8);
}

TEST_CASE("rank-deficient reference is refused") {
  OscillatorParams p = warm_oscillator();
  p.Ta = p.Tb = 0.0;
  const OscillatorScenario s = build_oscillator_scenario(p);
  const Matrix pi0 = steady_state(s.l0).matrix();
  CHECK(error_code_of([&] { entropy_first_order(s.l0, s.l1, pi0, Matrix::Zero(pi0.rows(), pi0.cols()), 0.0); }) ==
        ErrorCode::RankDeficientState);
}

}  // TEST_SUITE
