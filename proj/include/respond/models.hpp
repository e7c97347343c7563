#pragma once

#include "respond/core.hpp"
#include "respond/lgks.hpp"
#include "respond/perturb.hpp"

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace respond {

// ---- two coupled oscillators ------------------------------------------------

// Modes a, b with frequency omega and hopping g; a linear field epsilon on the a + b symmetric combination,
// bath a couples to a + a^dagger, bath b to b + b^dagger. Normal modes omega_pm = omega +- g.
struct OscillatorParams {
  double omega = 10.0;
  double g = 6.3;
  double epsilon = 1.0;
  double gamma_plus = 1.0;
  double gamma_minus = 1.0;
  double Ta = 2.0;
  double Tb = 2.5;
  int nmax_plus = 8;   // Fock levels kept for the plus mode
  int nmax_minus = 8;  // Fock levels kept for the minus mode
  double delta = 0.02;

  double omega_plus() const { return omega + g; }
  double omega_minus() const { return omega - g; }
  double field_shift() const { return epsilon / omega_plus(); }  // c = epsilon / omega_plus
  void validate() const;
};

// fig2, fig3, fig2-deskscale. InvalidArgument for unknown names.
OscillatorParams oscillator_preset(std::string_view name);
std::vector<std::string> oscillator_preset_names();

struct OscillatorOperators {
  Matrix d_plus;   // undisplaced normal-mode lowering operators
  Matrix d_minus;
  Matrix a;
  Matrix b;
  Matrix ada;      // a^dagger a
  Matrix x_minus;  // d_- + d_-^dagger
};

// Displaced normal-mode Fock basis |n_+, n_-> with index n_+ * nmax_minus + n_-; D_+ = d_+ + c is the
// truncated lowering operator, so H0 is diagonal.
OscillatorOperators oscillator_operators(const OscillatorParams& p);

struct OscillatorScenario {
  OscillatorParams params;
  OscillatorOperators ops;
  Matrix h0;
  Matrix v;  // omega_minus x_-^3, multiplied by delta in the perturbed generator
  std::vector<BathSpec> baths;
  Liouvillian l0;
  FirstOrderGenerator l1;
  std::vector<std::string> warnings;
};

// TruncationTooSmall if the mean minus-mode occupation exceeds nmax_minus / 4 (or plus mode nmax_plus / 4).
OscillatorScenario build_oscillator_scenario(const OscillatorParams& p);

// Mean thermal occupations (n^a + n^b) / 2 of each normal mode.
double mean_occupation_minus(const OscillatorParams& p);
double mean_occupation_plus(const OscillatorParams& p);

// Reference closed forms.
double oscillator_ada(const OscillatorParams& p);
double oscillator_phi11(const OscillatorParams& p, double tau);
double oscillator_phi12(const OscillatorParams& p, double tau);
double oscillator_Phi11_inf(const OscillatorParams& p);
double oscillator_Phi12_inf(const OscillatorParams& p);
// Reference coefficients f^2 .. f^5.
std::array<double, 4> oscillator_f_reference(const OscillatorParams& p, double tau);

// Bath part and its time integral derived from the Heisenberg closure; differs from the reference form by the
// factor (n - 1) -> -1.
double oscillator_phi12_closure(const OscillatorParams& p, double tau);
double oscillator_phi11_closure(const OscillatorParams& p, double tau);
double oscillator_Phi12_inf_closure(const OscillatorParams& p);

enum class OscillatorQuantity { Ada, Phi11, Phi12, Phi11Inf, Phi12Inf, FCoeffs };
std::vector<double> oscillator_reference(OscillatorQuantity q, const OscillatorParams& p, double tau = 0.0);

// Operator basis of the closure: {d_-^dag d_-, x_-, y_-, u, v, d_+^dag d_+, x_+, y_+, 1} with
// x = d + d^dag, y = i(d - d^dag), u = d_+^dag d_- + h.c., v = i(d_+^dag d_- - h.c.).
enum ClosureIndex { kNMinus = 0, kXMinus, kYMinus, kU, kV, kNPlus, kXPlus, kYPlus, kOne };
// dB_k/dt = sum_j G(k, j) B_j under the adjoint unperturbed generator.
RealMatrix oscillator_closure_generator(const OscillatorParams& p);
// Closure basis operators as matrices on the truncated space.
std::array<Matrix, 9> oscillator_closure_operators(const OscillatorParams& p);
// a^dagger a(t) = sum_k f_k(t) B_k with f(0) = (1/2, 0, 0, -1/2, 0, 1/2, 0, 0, 0).
std::array<double, 9> oscillator_heisenberg_coefficients(const OscillatorParams& p, double t);

// <a^dagger a> at the numerical steady state at the given and at nmax + 2 in both modes;
// TruncationTooSmall if the relative change exceeds rel_tol.
struct TruncationCheck {
  double value = 0.0;
  double value_larger = 0.0;
  double relative_change = 0.0;
};
TruncationCheck oscillator_truncation_check(const OscillatorParams& p, double rel_tol = 1e-4);

// ---- two coupled qubits -----------------------------------------------------

struct QubitParams {
  double omega = 1000.0;
  double g = 200.0;
  double gamma_plus = 1.0;
  double gamma_minus = 1.0;
  double Omega = 100.0;
  double Ta = 60.0;
  double Tb = 40.0;
  double delta = 0.5;

  double omega_plus() const { return omega + g; }
  double omega_minus() const { return omega - g; }
  void validate() const;
};

// fig4-low-T, fig4-high-T.
QubitParams qubit_preset(std::string_view name);
std::vector<std::string> qubit_preset_names();

struct QubitOperators {
  Matrix sx_a, sy_a, sz_a, sm_a;
  Matrix sx_b, sy_b, sz_b, sm_b;
  Matrix a_plus, a_minus, b_plus, b_minus;
  // |00>, |+>, |->, |11> with |pm> = (|01> pm |10>)/sqrt 2; |q_A q_B> has index 2 q_A + q_B, 0 = ground.
  Vector ket00, ket_plus, ket_minus, ket11;
};
QubitOperators qubit_operators();

struct QubitScenario {
  QubitParams params;
  QubitOperators ops;
  Matrix h0;
  Matrix v;  // Omega sigma_z^A sigma_z^B
  std::vector<BathSpec> baths;
  Liouvillian l0;  // global generator of H0
};

QubitScenario build_qubit_scenario(const QubitParams& p);

double qubit_j0(const QubitParams& p);
double qubit_j1(const QubitParams& p);
enum class QubitQuantity { J0, J1 };
double qubit_reference(QubitQuantity q, const QubitParams& p);

struct QubitGlobalChannel {
  double omega = 0.0;
  double gamma = 0.0;
  Matrix s;  // S_j
};
// S_1..S_4 at omega_mp -+ 2 delta Omega.
std::vector<QubitGlobalChannel> qubit_global_channels(const QubitParams& p);
// Generator of H0 + delta V with the four channels built explicitly.
Liouvillian build_perturbed_qubit_global(const QubitParams& p);
// sum_j omega_j (-gamma_j (n_j^a + 1) <S_j^dag S_j> + gamma_j n_j^a <S_j S_j^dag>).
double qubit_global_current(const QubitParams& p, const Matrix& rho);

}  // namespace respond
