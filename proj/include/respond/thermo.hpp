#pragma once

#include "respond/core.hpp"
#include "respond/lgks.hpp"
#include "respond/perturb.hpp"

#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace respond {

struct HeatCurrentForms {
  double energy_form = 0.0;  // Tr(rho D^dagger H)
  double entropy_form = std::numeric_limits<double>::quiet_NaN();  // -T Tr((D rho) ln pi), pi = Gibbs(H, T)
  bool entropy_available = false;  // false for T = 0 (SingularReference)
};

// Both forms of the heat current from one bath.
HeatCurrentForms heat_current_forms(const Liouvillian& l, std::string_view bath_label, const Matrix& h,
                                    const Matrix& rho);
// Energy form; valid for every temperature.
double heat_current(const Liouvillian& l, std::string_view bath_label, const Matrix& h, const Matrix& rho);

// -sum p ln p over eigenvalues above 1e-14.
double von_neumann_entropy(const Matrix& rho);

struct ThermoSnapshot {
  double t = 0.0;
  std::map<std::string, double> heat_currents;
  double entropy = 0.0;
  double entropy_rate = 0.0;        // dS/dt = -Tr((L rho) ln rho)
  double entropy_production = 0.0;  // dS/dt - sum J / T
  int clamped = 0;                  // eigenvalues of rho clamped at 1e-14 before the logarithm
};

// ZeroTemperatureBath if any bath has T = 0.
ThermoSnapshot entropy_production(const Liouvillian& l, const Matrix& rho, const Matrix& h, double t = 0.0);

// -Tr((L rho)(ln rho - ln pi)); NotStationaryReference unless ||L pi|| <= 1e-8 ||L||.
double spohn_functional(const Liouvillian& l, const Matrix& rho, const Matrix& pi);
double spohn_functional(const Superoperator& gen, const Matrix& rho, const Matrix& pi);

inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

struct FirstOrderHeat {
  double energy_form = 0.0;
  double entropy_form = std::numeric_limits<double>::quiet_NaN();
  bool entropy_available = false;
};

// J1 of one bath at time t (t = kInfiniteTime uses rho1 at the new steady state).
// Energy form: Tr(rho1 D0^dagger H0) + Tr(pi0 D1^dagger H0) + Tr(pi0 D0^dagger V).
// Entropy form: -T [Tr(rho1 D0^dagger ln pi0) + Tr(pi0 D1^dagger ln pi0) + Tr(pi0 D0^dagger d ln pi / d delta)],
// where d ln pi / d delta = -V/T up to a multiple of the identity.
FirstOrderHeat heat_current_first_order(const Liouvillian& l0, const FirstOrderGenerator& l1, const Matrix& pi0,
                                        std::string_view bath_label, double t, double dt = 0.0);
FirstOrderHeat heat_current_first_order(const Liouvillian& l0, const FirstOrderGenerator& l1, const Matrix& pi0,
                                        std::string_view bath_label, const Matrix& rho1);

// dJ/d delta at delta = 0 for the local generator with H0 + delta V in the commutator and the dissipators of H0:
// Tr(rho1 D0^dagger H0) + Tr(pi0 D0^dagger V) with L0 rho1 = i[V, pi0], Tr rho1 = 0. Valid for any V.
double heat_current_local_first_order(const Liouvillian& l0, const Matrix& v, const Matrix& pi0,
                                      std::string_view bath_label);

struct FirstOrderEntropy {
  double t = 0.0;
  double s1 = 0.0;      // -Tr(rho1 ln pi0)
  double ds1_dt = 0.0;  // -Tr((L0 rho1 + L1 pi0) ln pi0)
  std::map<std::string, double> j1;
  double sigma1 = 0.0;  // ds1_dt - sum J1 / T
};

// RankDeficientState if pi0 has eigenvalues below 1e-14.
FirstOrderEntropy entropy_first_order(const Liouvillian& l0, const FirstOrderGenerator& l1, const Matrix& pi0,
                                      const Matrix& rho1, double t);
std::vector<FirstOrderEntropy> entropy_first_order_trajectory(const Liouvillian& l0, const FirstOrderGenerator& l1,
                                                              const Matrix& pi0, const std::vector<double>& times,
                                                              double dt = 0.0);

}  // namespace respond
