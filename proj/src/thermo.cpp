#include "respond/thermo.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace respond {

namespace {

double real_trace(const Matrix& a, const Matrix& b) { return trace_product(a, b).real(); }

}  // namespace

HeatCurrentForms heat_current_forms(const Liouvillian& l, std::string_view bath_label, const Matrix& h,
                                    const Matrix& rho) {
  const char* op = "heat_current";
  require_same_dim(l.hamiltonian(), h, op);
  require_same_dim(l.hamiltonian(), rho, op);
  const Dissipator& d = l.dissipator(bath_label);
  const Superoperator gen = l.bath_superoperator(bath_label);
  HeatCurrentForms out;
  out.energy_form = real_trace(rho, gen.apply_adjoint(h));
  if (d.temperature > 0.0) {
    out.entropy_form = -d.temperature * real_trace(gen.apply(rho), log_gibbs(h, d.temperature));
    out.entropy_available = true;
  }
  return out;
}

double heat_current(const Liouvillian& l, std::string_view bath_label, const Matrix& h, const Matrix& rho) {
  return heat_current_forms(l, bath_label, h, rho).energy_form;
}

double von_neumann_entropy(const Matrix& rho) {
  require_hermitian(rho, "von_neumann_entropy", 1e-10);
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-14) s -= p * std::log(p);
  }
  return s;
}

ThermoSnapshot entropy_production(const Liouvillian& l, const Matrix& rho, const Matrix& h, double t) {
  const char* op = "entropy_production";
  for (const auto& d : l.dissipators()) {
    if (!(d.temperature > 0.0)) {
      throw Error(ErrorCode::ZeroTemperatureBath, op, "bath '" + d.label + "' has zero temperature");
    }
  }
  ThermoSnapshot snap;
  snap.t = t;
  const HermitianLog lg = hermitian_log(0.5 * (rho + rho.adjoint()));
  snap.clamped = lg.clamped;
  snap.entropy = von_neumann_entropy(0.5 * (rho + rho.adjoint()));
  snap.entropy_rate = -real_trace(l.apply(rho), lg.log);
  double flow = 0.0;
  for (const auto& d : l.dissipators()) {
    const double j = heat_current(l, d.label, h, rho);
    snap.heat_currents[d.label] = j;
    flow += j / d.temperature;
  }
  snap.entropy_production = snap.entropy_rate - flow;
  return snap;
}

double spohn_functional(const Superoperator& gen, const Matrix& rho, const Matrix& pi) {
  const char* op = "spohn_functional";
  require_same_dim(gen.k(), rho, op);
  require_same_dim(gen.k(), pi, op);
  const double residual = gen.apply(pi).norm();
  if (residual > 1e-8 * std::max(gen.norm_estimate(), 1.0)) {
    std::ostringstream msg;
    msg << "reference is not stationary: ||L pi|| = " << residual;
    throw Error(ErrorCode::NotStationaryReference, op, msg.str());
  }
  const Matrix lr = hermitian_log(0.5 * (rho + rho.adjoint())).log;
  const Matrix lp = hermitian_log(0.5 * (pi + pi.adjoint())).log;
  return -real_trace(gen.apply(rho), lr - lp);
}

double spohn_functional(const Liouvillian& l, const Matrix& rho, const Matrix& pi) {
  return spohn_functional(l.superoperator(), rho, pi);
}

FirstOrderHeat heat_current_first_order(const Liouvillian& l0, const FirstOrderGenerator& l1, const Matrix& pi0,
                                        std::string_view bath_label, const Matrix& rho1) {
  const char* op = "heat_current_first_order";
  require_same_dim(l0.hamiltonian(), rho1, op);
  const std::string label(bath_label);
  const Matrix& h0 = l0.hamiltonian();
  const Matrix& v = l1.v();
  const Superoperator d0 = l0.bath_superoperator(label);
  const Superoperator d1 = l1.bath_superoperator(label);
  const double temperature = l0.dissipator(label).temperature;

  FirstOrderHeat out;
  out.energy_form = real_trace(rho1, d0.apply_adjoint(h0)) + real_trace(pi0, d1.apply_adjoint(h0)) +
                    real_trace(pi0, d0.apply_adjoint(v));
  if (temperature > 0.0) {
    const Matrix ln_pi = log_gibbs(h0, temperature);
    // ln Gibbs(H0 + delta V) = -(H0 + delta V)/T - ln Z; the constant is annihilated by D0^dagger.
    const double dlog_term = -real_trace(pi0, d0.apply_adjoint(v)) / temperature;
    out.entropy_form =
        -temperature * (real_trace(rho1, d0.apply_adjoint(ln_pi)) + real_trace(pi0, d1.apply_adjoint(ln_pi)) + dlog_term);
    out.entropy_available = true;
  }
  return out;
}

FirstOrderHeat heat_current_first_order(const Liouvillian& l0, const FirstOrderGenerator& l1, const Matrix& pi0,
                                        std::string_view bath_label, double t, double dt) {
  const Matrix rho1 = std::isinf(t) ? first_order_steady_state(l0, l1, pi0) : first_order_state(l0, l1, pi0, t, dt);
  return heat_current_first_order(l0, l1, pi0, bath_label, rho1);
}

double heat_current_local_first_order(const Liouvillian& l0, const Matrix& v, const Matrix& pi0,
                                      std::string_view bath_label) {
  const char* op = "heat_current_local_first_order";
  require_same_dim(l0.hamiltonian(), v, op);
  require_same_dim(l0.hamiltonian(), pi0, op);
  const Matrix rhs = Complex(0.0, 1.0) * commutator(v, pi0);
  const Matrix rho1 = solve_bordered(l0, rhs, Complex(0.0, 0.0));
  const Superoperator d0 = l0.bath_superoperator(bath_label);
  return real_trace(rho1, d0.apply_adjoint(l0.hamiltonian())) + real_trace(pi0, d0.apply_adjoint(v));
}

namespace {

Matrix full_rank_log(const Matrix& pi0, const char* op) {
  const HermitianLog lg = hermitian_log(0.5 * (pi0 + pi0.adjoint()));
  if (lg.clamped > 0) {
    std::ostringstream msg;
    msg << "reference state has " << lg.clamped << " eigenvalues below 1e-14";
    throw Error(ErrorCode::RankDeficientState, op, msg.str());
  }
  return lg.log;
}

FirstOrderEntropy entropy_first_order_impl(const Liouvillian& l0, const FirstOrderGenerator& l1, const Matrix& pi0,
                                           const Matrix& ln_pi0, const Matrix& l1pi0, const Matrix& rho1, double t) {
  FirstOrderEntropy e;
  e.t = t;
  e.s1 = -real_trace(rho1, ln_pi0);
  e.ds1_dt = -real_trace(l0.apply(rho1) + l1pi0, ln_pi0);
  double flow = 0.0;
  for (const auto& d : l0.dissipators()) {
    const double j = heat_current_first_order(l0, l1, pi0, d.label, rho1).energy_form;
    e.j1[d.label] = j;
    if (!(d.temperature > 0.0)) {
      throw Error(ErrorCode::ZeroTemperatureBath, "entropy_first_order", "bath '" + d.label + "' has zero temperature");
    }
    flow += j / d.temperature;
  }
  e.sigma1 = e.ds1_dt - flow;
  return e;
}

}  // namespace

FirstOrderEntropy entropy_first_order(const Liouvillian& l0, const FirstOrderGenerator& l1, const Matrix& pi0,
                                      const Matrix& rho1, double t) {
  const char* op = "entropy_first_order";
  const Matrix ln_pi0 = full_rank_log(pi0, op);
  return entropy_first_order_impl(l0, l1, pi0, ln_pi0, l1.apply(pi0), rho1, t);
}

std::vector<FirstOrderEntropy> entropy_first_order_trajectory(const Liouvillian& l0, const FirstOrderGenerator& l1,
                                                              const Matrix& pi0, const std::vector<double>& times,
                                                              double dt) {
  const char* op = "entropy_first_order";
  const Matrix ln_pi0 = full_rank_log(pi0, op);
  const Matrix l1pi0 = l1.apply(pi0);
  const std::vector<Matrix> rho1 = first_order_trajectory(l0, l1, pi0, times, dt);
  std::vector<FirstOrderEntropy> out;
  out.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    out.push_back(entropy_first_order_impl(l0, l1, pi0, ln_pi0, l1pi0, rho1[i], times[i]));
  return out;
}

}  // namespace respond
