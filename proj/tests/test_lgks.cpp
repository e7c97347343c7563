#include "doctest.h"

#include "respond/lgks.hpp"
#include "respond/models.hpp"
#include "respond/thermo.hpp"

#include <cmath>

using namespace respond;

namespace {

const Complex I(0.0, 1.0);

Matrix sigma_z() {
  Matrix m(2, 2);
  m << -1, 0, 0, 1;
  return m;
}
Matrix sigma_minus() {
  Matrix m(2, 2);
  m << 0, 1, 0, 0;
  return m;
}
Matrix sigma_x() { return sigma_minus() + sigma_minus().adjoint(); }
Matrix projector(Index n, Index k) {
  Matrix m = Matrix::Zero(n, n);
  m(k, k) = 1.0;
  return m;
}

Liouvillian damped_qubit(double omega, double gamma, double temperature) {
  return build_liouvillian(0.5 * omega * sigma_z(), {{"bath", sigma_x(), temperature, flat_rate(gamma)}});
}

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

}  // namespace

TEST_SUITE("lgks") {

TEST_CASE("bose occupation") {
  CHECK(bose_occupation(2.0, 2.0) == doctest::Approx(1.0 / (std::exp(1.0) - 1.0)).epsilon(1e-14));
  CHECK(bose_occupation(2.0, 2.0) == doctest::Approx(0.58198).epsilon(1e-5));
  CHECK(bose_occupation(3.0, 0.0) == 0.0);
  CHECK(bose_occupation(std::log(2.0), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(error_code_of([] { bose_occupation(0.0, 1.0); }) == ErrorCode::NonpositiveFrequency);
  CHECK(error_code_of([] { bose_occupation(-1.0, 1.0); }) == ErrorCode::NonpositiveFrequency);
}

TEST_CASE("bath rates and KMS") {
  const double gamma = 0.7;
  BathSpec cold{"c", sigma_x(), 0.0, flat_rate(gamma)};
  const RatePair r0 = bath_rate(cold, 1.0);
  CHECK(r0.down == doctest::Approx(gamma));
  CHECK(r0.up == 0.0);
  BathSpec warm{"w", sigma_x(), 1.0, flat_rate(gamma)};
  const RatePair r1 = bath_rate(warm, std::log(2.0));
  CHECK(r1.down == doctest::Approx(2.0 * gamma));
  CHECK(r1.up == doctest::Approx(gamma));
  const RatePair r2 = bath_rate(warm, 1.0);
  CHECK(r2.up / r2.down == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(error_code_of([&] { bath_rate(warm, 0.0); }) == ErrorCode::ZeroFrequencyChannel);
  BathSpec bad{"x", sigma_x(), 1.0, [](double) { return -1.0; }};
  CHECK(error_code_of([&] { bath_rate(bad, 1.0); }) == ErrorCode::NegativeRate);
}

TEST_CASE("two-level Bohr decomposition") {
  const double omega = 3.0;
  const BohrDecomposition dec = bohr_decompose(sigma_x(), eigendecompose_hermitian(0.5 * omega * sigma_z()));
  REQUIRE(dec.channels.size() == 1);
  CHECK(dec.channels[0].omega == doctest::Approx(omega));
  CHECK((dec.channels[0].jump - sigma_minus()).norm() < 1e-14);
  CHECK(dec.zero_channel.norm() < 1e-14);
}

TEST_CASE("qubit pair Bohr channels of sigma_x^A") {
  const QubitParams p;
  const QubitScenario s = build_qubit_scenario(p);
  const BohrDecomposition dec = bohr_decompose(s.ops.sx_a, eigendecompose_hermitian(s.h0));
  REQUIRE(dec.channels.size() == 2);
  CHECK(dec.channels[0].omega == doctest::Approx(p.omega_minus()));
  CHECK(dec.channels[1].omega == doctest::Approx(p.omega_plus()));
  CHECK((dec.channels[0].jump - s.ops.a_minus).norm() < 1e-12);
  CHECK((dec.channels[1].jump - s.ops.a_plus).norm() < 1e-12);
  CHECK((commutator(s.h0, s.ops.a_plus) + p.omega_plus() * s.ops.a_plus).norm() < 1e-12 * p.omega);
  CHECK((commutator(s.h0, s.ops.a_minus) + p.omega_minus() * s.ops.a_minus).norm() < 1e-12 * p.omega);
}

TEST_CASE("perturbed qubit pair has four channels") {
  QubitParams p;
  p.delta = 0.1;
  const QubitScenario s = build_qubit_scenario(p);
  const BohrDecomposition dec = bohr_decompose(s.ops.sx_a, eigendecompose_hermitian(s.h0 + p.delta * s.v));
  REQUIRE(dec.channels.size() == 4);
  const double shift = 2.0 * p.delta * p.Omega;
  const double expected[] = {p.omega_minus() - shift, p.omega_minus() + shift, p.omega_plus() - shift,
                             p.omega_plus() + shift};
  for (int k = 0; k < 4; ++k) CHECK(dec.channels[k].omega == doctest::Approx(expected[k]).epsilon(1e-12));
}

TEST_CASE("Bohr decomposition invariants on random operators") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix h = random_hermitian(5, rng);
    const Matrix s = random_hermitian(5, rng);
    const EigenSystem eig = eigendecompose_hermitian(h);
    const BohrDecomposition dec = bohr_decompose(s, eig);
    CHECK((dec.reconstruct() - s).norm() < 1e-10 * s.norm());
    for (const auto& c : dec.channels) {
      CHECK(c.omega > 0.0);
      CHECK((commutator(h, c.jump) + c.omega * c.jump).norm() < 1e-8 * std::max(1.0, h.norm()));
    }
  }
}

TEST_CASE("zero rate gives the zero map") {
  const Matrix h = 0.5 * sigma_z();
  const Dissipator d = build_dissipator({"z", sigma_x(), 1.0, flat_rate(0.0)}, bohr_decompose(sigma_x(), eigendecompose_hermitian(h)));
  std::mt19937_64 rng(1);
  CHECK(d.superoperator().apply(random_matrix(2, rng)).norm() < 1e-15);
}

TEST_CASE("zero-temperature decay of the excited state") {
  const double gamma = 0.8;
  const Liouvillian l = damped_qubit(2.0, gamma, 0.0);
  const Matrix out = l.bath_superoperator("bath").apply(projector(2, 1));
  CHECK((out - gamma * (projector(2, 0) - projector(2, 1))).norm() < 1e-14);
}

TEST_CASE("qubit pair dissipator matches the explicit channel form") {
  const QubitParams p;
  const QubitScenario s = build_qubit_scenario(p);
  const double npl = bose_occupation(p.omega_plus(), p.Ta);
  const double nmi = bose_occupation(p.omega_minus(), p.Ta);
  const Superoperator expected = Superoperator::lindblad(p.gamma_plus * (npl + 1.0), s.ops.a_plus) +
                                 Superoperator::lindblad(p.gamma_plus * npl, s.ops.a_plus.adjoint()) +
                                 Superoperator::lindblad(p.gamma_minus * (nmi + 1.0), s.ops.a_minus) +
                                 Superoperator::lindblad(p.gamma_minus * nmi, s.ops.a_minus.adjoint());
  std::mt19937_64 rng(17);
  const Matrix rho = random_density_matrix(4, rng).matrix();
  const Superoperator d = s.l0.bath_superoperator("a");
  CHECK((d.apply(rho) - expected.apply(rho)).norm() < 1e-12);
}

TEST_CASE("zero-frequency channel policy") {
  // Degenerate levels coupled by S give a nontrivial S(0).
  Matrix h = Matrix::Zero(3, 3);
  h(2, 2) = 1.0;
  Matrix s = Matrix::Zero(3, 3);
  s(0, 1) = s(1, 0) = 1.0;
  s(0, 2) = s(2, 0) = 1.0;
  const std::vector<BathSpec> baths{{"a", s, 1.0, flat_rate(1.0)}};
  CHECK(error_code_of([&] { build_liouvillian(h, baths); }) == ErrorCode::ZeroFrequencyChannel);
  BuildOptions opts;
  opts.zero_frequency = ZeroFrequencyPolicy::Drop;
  CHECK(build_liouvillian(h, baths, opts).dissipator("a").channels.size() == 1);
}

TEST_CASE("no baths gives the commutator") {
  std::mt19937_64 rng(2);
  const Matrix h = random_hermitian(3, rng);
  const Liouvillian l = build_liouvillian(h, {});
  const Matrix rho = random_density_matrix(3, rng).matrix();
  CHECK((l.apply(rho) + I * commutator(h, rho)).norm() < 1e-13);
}

TEST_CASE("unknown bath label") {
  const Liouvillian l = damped_qubit(1.0, 1.0, 1.0);
  CHECK(error_code_of([&] { l.dissipator("nope"); }) == ErrorCode::UnknownBath);
}

TEST_CASE("generator invariants: trace, Hermiticity, unitality, additivity, duality") {
  const QubitScenario s = build_qubit_scenario(QubitParams{});
  std::mt19937_64 rng(23);
  const double scale = s.l0.norm_estimate();
  const Liouvillian la = build_liouvillian(s.h0, {s.baths[0]});
  const Liouvillian lb = build_liouvillian(s.h0, {s.baths[1]});
  const Liouvillian lh = build_liouvillian(s.h0, {});
  for (int k = 0; k < 20; ++k) {
    const Matrix rho = random_hermitian(4, rng);
    const Matrix a = random_matrix(4, rng);
    const Matrix out = s.l0.apply(rho);
    CHECK(std::abs(out.trace()) < 1e-10 * scale);
    CHECK((out - out.adjoint()).norm() < 1e-10 * scale);
    CHECK((out - (la.apply(rho) + lb.apply(rho) - lh.apply(rho))).norm() < 1e-12 * scale);
    const Complex lhs = trace_product(s.l0.apply(rho), a);
    const Complex rhs = trace_product(rho, s.l0.apply_adjoint(a));
    CHECK(std::abs(lhs - rhs) < 1e-10 * scale);
  }
  CHECK(s.l0.apply_adjoint(identity(4)).norm() < 1e-12 * scale);
  for (const auto& d : s.l0.dissipators()) {
    for (const auto& c : d.channels) {
      CHECK(c.rate_down >= 0.0);
      CHECK(c.rate_up / c.rate_down == doctest::Approx(std::exp(-c.omega / d.temperature)).epsilon(1e-12));
    }
  }
}

TEST_CASE("adjoint of the damped qubit on the excited projector") {
  const double gamma = 1.3, omega = 1.0, temperature = 0.8;
  const double n = bose_occupation(omega, temperature);
  const Liouvillian l = damped_qubit(omega, gamma, temperature);
  const Matrix a = sigma_minus().adjoint() * sigma_minus();
  const Matrix expected = -gamma * (n + 1.0) * a + gamma * n * (identity(2) - a);
  CHECK((apply_adjoint(l, a) - expected).norm() < 1e-13);
}

TEST_CASE("propagation at t = 0 is the identity") {
  std::mt19937_64 rng(4);
  const Liouvillian l = damped_qubit(1.0, 1.0, 1.0);
  const Matrix x = random_matrix(2, rng);
  CHECK(propagate(l, x, 0.0, 0.0, Picture::Heisenberg) == x);
  CHECK(propagate(l, x, 0.0, 0.0, Picture::Schrodinger) == x);
}

TEST_CASE("closed qubit Heisenberg rotation") {
  const double omega = 2.0;
  const Liouvillian l = build_liouvillian(0.5 * omega * sigma_z(), {});
  for (double t : {0.3, 1.7, 4.0}) {
    const Matrix x = propagate(l, sigma_x(), t, 1e-3, Picture::Heisenberg);
    // H is diagonal, so exp(iHt) is explicit.
    Matrix u = Matrix::Zero(2, 2);
    const Matrix h = 0.5 * omega * sigma_z();
    for (int k = 0; k < 2; ++k) u(k, k) = std::exp(Complex(0.0, h(k, k).real() * t));
    const Matrix expected = u * sigma_x() * u.adjoint();
    CHECK((x - expected).norm() < 1e-8);
  }
}

TEST_CASE("damped qubit relaxes at rate gamma (2n + 1)") {
  const double gamma = 1.0, omega = 1.0, temperature = 1.5;
  const double n = bose_occupation(omega, temperature);
  const Liouvillian l = damped_qubit(omega, gamma, temperature);
  const Matrix a = projector(2, 1);
  const double p_eq = n / (2.0 * n + 1.0);
  for (double t : {0.0, 0.5, 1.0, 3.0}) {
    const Matrix rho = propagate(l, projector(2, 1), t, 1e-3, Picture::Schrodinger);
    const double p = trace_product(rho, a).real();
    CHECK(p == doctest::Approx(p_eq + (1.0 - p_eq) * std::exp(-gamma * (2.0 * n + 1.0) * t)).epsilon(1e-8));
    CHECK(std::abs(rho.trace() - 1.0) < 1e-8);
  }
}

TEST_CASE("RK4 converges at fourth order") {
  const Liouvillian l = damped_qubit(1.0, 1.0, 1.0);
  const double ratio = rk4_convergence_ratio(l.superoperator(), projector(2, 1), 2.0, 0.02, Picture::Schrodinger);
  CHECK(ratio > 14.0);
  CHECK(ratio < 18.0);
}

TEST_CASE("single-bath steady state is the Gibbs state") {
  const double omega = 1.0, temperature = 0.7;
  const Liouvillian l = damped_qubit(omega, 1.0, temperature);
  const double z = 1.0 + std::exp(-omega / temperature);
  for (auto method : {SteadyStateMethod::Nullspace, SteadyStateMethod::Direct, SteadyStateMethod::Longtime}) {
    const Matrix pi = steady_state(l, method).matrix();
    CHECK(pi(0, 0).real() == doctest::Approx(1.0 / z).epsilon(1e-7));
    CHECK(pi(1, 1).real() == doctest::Approx(std::exp(-omega / temperature) / z).epsilon(1e-7));
    CHECK(l.apply(pi).norm() <= 1e-9 * l.norm_estimate());
  }
}

TEST_CASE("qubit pair at equal temperatures is in equilibrium") {
  QubitParams p;
  p.Ta = p.Tb = 300.0;
  const QubitScenario s = build_qubit_scenario(p);
  const Matrix pi = steady_state(s.l0).matrix();
  CHECK((pi - gibbs_state(s.h0, 300.0).matrix()).norm() < 1e-7);
  CHECK(std::abs(heat_current(s.l0, "a", s.h0, pi)) < 1e-9);
}

TEST_CASE("qubit pair NESS currents") {
  QubitParams p;
  p.Ta = 600.0;
  p.Tb = 400.0;
  const QubitScenario s = build_qubit_scenario(p);
  const Matrix pi = steady_state(s.l0).matrix();
  const double ja = heat_current(s.l0, "a", s.h0, pi);
  const double jb = heat_current(s.l0, "b", s.h0, pi);
  CHECK(ja == doctest::Approx(qubit_j0(p)).epsilon(1e-8));
  CHECK(std::abs(ja + jb) < 1e-8 * std::abs(ja));
}

TEST_CASE("steady-state methods agree on a larger generator") {
  OscillatorParams p;
  p.nmax_plus = p.nmax_minus = 5;
  const OscillatorScenario s = build_oscillator_scenario(p);
  const Matrix direct = steady_state(s.l0, SteadyStateMethod::Direct).matrix();
  const Matrix nullspace = steady_state(s.l0, SteadyStateMethod::Nullspace).matrix();
  CHECK((direct - nullspace).norm() < 1e-9);
}

TEST_CASE("closed system has no unique steady state") {
  const Liouvillian l = build_liouvillian(0.5 * sigma_z(), {});
  CHECK(error_code_of([&] { steady_state(l, SteadyStateMethod::Nullspace); }) == ErrorCode::NonUniqueSteadyState);
  CHECK(error_code_of([&] { steady_state(l, SteadyStateMethod::Direct); }) == ErrorCode::NonUniqueSteadyState);
}

}  // TEST_SUITE
