#pragma once

#include "respond/core.hpp"
#include "respond/lgks.hpp"
#include "respond/superoperator.hpp"

#include <string>
#include <vector>

namespace respond {

// First-order Rayleigh-Schrodinger data for H0 + delta V.
struct PerturbationExpansion {
  EigenSystem basis;                        // zeroth-order basis, rotated so V is diagonal inside each group
  RealVector e1;                            // first-order eigenvalue shifts
  Matrix psi1;                              // column n: correction to |n> in the rotated basis
  Matrix v_basis;                           // V in the rotated basis
  std::vector<std::size_t> degenerate_blocks;  // groups of size > 1 whose basis was rotated
  double v_norm = 0.0;                      // spectral norm of V
};

// Degenerate groups are resolved by diagonalizing V inside each group. A group whose V eigenvalues are
// themselves degenerate while second-order coupling mixes the members raises UnresolvedDegeneracy.
PerturbationExpansion first_order_corrections(const EigenSystem& eig, const Matrix& v);

// S(omega) = S0(omega) + delta S1(omega) + O(delta^2), with omega > 0 the unperturbed Bohr frequency.
struct CouplingExpansionChannel {
  double omega = 0.0;
  Matrix s0;
  Matrix s1;
};

// Valid only when the first-order eigenvalue shifts are uniform (max E1 - min E1 <= shift_tol * ||V||).
std::vector<CouplingExpansionChannel> expand_coupling_operators(const PerturbationExpansion& exp,
                                                                const BohrDecomposition& dec, const Matrix& s,
                                                                double shift_tol = 1e-10);

struct FirstOrderChannel {
  double omega = 0.0;
  double rate_down = 0.0;
  double rate_up = 0.0;
  Matrix s0;
  Matrix s1;
};

struct FirstOrderDissipator {
  std::string label;
  double temperature = 0.0;
  std::vector<FirstOrderChannel> channels;

  // sum_omega Gamma(omega) (S0 rho S1^dagger - 1/2 {S1^dagger S0, rho}) + h.c., both signs of omega.
  Superoperator superoperator(Index dim) const;
};

FirstOrderDissipator build_first_order_dissipator(const BathSpec& bath,
                                                  const std::vector<CouplingExpansionChannel>& channels);

// L1 = -i[V, .] + sum_alpha D1^alpha
class FirstOrderGenerator {
 public:
  FirstOrderGenerator(Matrix v, std::vector<FirstOrderDissipator> dissipators);

  Index dim() const { return v_.rows(); }
  const Matrix& v() const { return v_; }
  const std::vector<FirstOrderDissipator>& dissipators() const { return dissipators_; }
  const Superoperator& superoperator() const { return full_; }
  // D1^alpha alone.
  Superoperator bath_superoperator(const std::string& label) const;
  // Bath-induced part sum_alpha D1^alpha.
  const Superoperator& dissipative_part() const { return dissipative_; }

  Matrix apply(const Matrix& rho) const { return full_.apply(rho); }
  Matrix apply_adjoint(const Matrix& x) const { return full_.apply_adjoint(x); }

 private:
  Matrix v_;
  std::vector<FirstOrderDissipator> dissipators_;
  Superoperator full_;
  Superoperator dissipative_;
};

FirstOrderGenerator build_first_order_generator(const Matrix& v, std::vector<FirstOrderDissipator> d1);

// Expansion, channel expansion and D1 for every bath in one call.
FirstOrderGenerator build_first_order(const Matrix& h0, const Matrix& v, const std::vector<BathSpec>& baths,
                                      const BuildOptions& opts = {});

// rho1(t) = int_0^t exp(L0 tau) L1 pi0 dtau. Raises NotSteady if ||L0 pi0|| > 1e-8 ||L0||.
Matrix first_order_state(const Liouvillian& l0, const FirstOrderGenerator& l1, const Matrix& pi0, double t,
                         double dt = 0.0);
std::vector<Matrix> first_order_trajectory(const Liouvillian& l0, const FirstOrderGenerator& l1, const Matrix& pi0,
                                           const std::vector<double>& times, double dt = 0.0);
// rho1(infinity): L0 rho1 = -L1 pi0 with Tr rho1 = 0.
Matrix first_order_steady_state(const Liouvillian& l0, const FirstOrderGenerator& l1, const Matrix& pi0);

// Commutator carries H0 + delta V; dissipators stay those of H0.
Liouvillian build_local_perturbed(const Matrix& h0, const Matrix& v, double delta, const std::vector<BathSpec>& baths,
                                  const BuildOptions& opts = {});
// Rediagonalized generator of H0 + delta V.
Liouvillian build_global_perturbed(const Matrix& h0, const Matrix& v, double delta,
                                   const std::vector<BathSpec>& baths, const BuildOptions& opts = {});

enum class PerturbationMode { Local, Global };
Liouvillian build_perturbed(PerturbationMode mode, const Matrix& h0, const Matrix& v, double delta,
                            const std::vector<BathSpec>& baths, const BuildOptions& opts = {});

enum class Regime { Local, Intermediate, Global };
std::string_view regime_name(Regime r);

struct RegimeThresholds {
  double local_below = 0.1;
  double global_above = 10.0;
};

struct RegimeReport {
  double nu1 = 0.0;
  double gamma_scale = 1.0;
  Regime regime = Regime::Local;
};

// nu1 is the largest first-order splitting delta |(E1_m - E1_n) - (E1_m' - E1_n')| among level pairs that share
// an unperturbed Bohr frequency (including the zero frequency).
RegimeReport classify_regime(const PerturbationExpansion& exp, double delta, double gamma_scale,
                             const RegimeThresholds& thresholds = {});

}  // namespace respond
