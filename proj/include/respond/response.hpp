#pragma once

#include "respond/core.hpp"
#include "respond/lgks.hpp"
#include "respond/perturb.hpp"

#include <functional>
#include <string>
#include <vector>

namespace respond {

struct ResponseTrace {
  std::vector<double> tau;
  std::vector<double> phi11;      // Kubo part  i <[V, A(tau)]>
  std::vector<double> phi12;      // bath part  <D1^dagger A(tau)>
  std::vector<double> phi_total;  // <L1^dagger A(tau)>
  std::string scenario;
  std::string observable;
  double delta = 0.0;
};

// Heisenberg propagation of A under L0 evaluated against -i[V, pi0] and D1 pi0.
// A must be Hermitian; imaginary parts above 1e-9 of the scale raise NonHermitianInput.
ResponseTrace response_function(const Matrix& a, const Liouvillian& l0, const FirstOrderGenerator& l1,
                                const Matrix& pi0, const std::vector<double>& tau_grid, double dt = 0.0);

// Uniform grid of n points on [0, t_max].
std::vector<double> uniform_grid(double t_max, std::size_t n);
// 4000 points to ln(1e7) / kappa_slow, so the slowest mode decays by 1e-7 at the end of the grid.
std::vector<double> default_tau_grid(double kappa_slow, std::size_t n = 4000);

// Running integral int_0^{x_i} f on a possibly nonuniform grid using piecewise parabolas.
std::vector<double> cumulative_simpson(const std::vector<double>& x, const std::vector<double>& f);
std::vector<double> cumulative_trapezoid(const std::vector<double>& x, const std::vector<double>& f);
// int_{x_0}^{t} f for x_0 <= t <= x_back; GridTooCoarse if Simpson and trapezoid differ by more than
// rel_tol * int |f|.
double integrate_to(const std::vector<double>& x, const std::vector<double>& f, double t, double rel_tol = 1e-4);

struct IntegratedResponse {
  double phi11 = 0.0;
  double phi12 = 0.0;
};
IntegratedResponse integrated_response(const ResponseTrace& trace, double t);

struct SteadyResponse {
  double phi11 = 0.0;
  double phi12 = 0.0;
  double total = 0.0;
  double tail11 = 0.0;  // exponential tail added beyond the grid
  double tail12 = 0.0;
};
// Phi(infinity): integral to the end of the grid plus an exponential tail fitted on the last tenth.
// NonDecayingResponse if max |phi| over the last 5% exceeds 1e-6 max |phi|.
SteadyResponse steady_state_response(const ResponseTrace& trace);

struct OracleResult {
  double derivative = 0.0;
  double error_estimate = 0.0;
  std::vector<double> deltas;
  std::vector<double> central_differences;
};

using GeneratorFamily = std::function<Liouvillian(double delta)>;
// Steady-state observable; the generator's Hamiltonian is H0 + delta V.
using ObservableFunctional = std::function<double(const Liouvillian& l, const DensityMatrix& rho)>;

// d<A>/d delta at 0: central differences at +-delta, Richardson-extrapolated in delta^2.
// Needs at least three deltas spanning a decade; the error estimate compares against the extrapolation
// without the largest delta.
OracleResult finite_difference_oracle(const GeneratorFamily& family, const ObservableFunctional& observable,
                                      const std::vector<double>& deltas,
                                      SteadyStateMethod method = SteadyStateMethod::Auto);

// Steady-state expectation of a fixed operator.
ObservableFunctional expectation_functional(Matrix a);

}  // namespace respond
