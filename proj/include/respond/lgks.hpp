#pragma once

#include "respond/core.hpp"
#include "respond/superoperator.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace respond {

// gamma(omega) for omega > 0, in units of the reference rate.
using RateProfile = std::function<double(double)>;

RateProfile flat_rate(double gamma);
// gamma_low below split, gamma_high at or above it; used to assign independent rates to two Bohr bands.
RateProfile banded_rate(double split, double gamma_low, double gamma_high);

struct BathSpec {
  std::string label;
  Matrix coupling;  // Hermitian system operator S
  double temperature = 0.0;
  RateProfile rate_profile;
};

// n(omega) = 1/(exp(omega/T) - 1); exactly 0 at T = 0.
double bose_occupation(double omega, double temperature);

struct RatePair {
  double down = 0.0;  // Gamma(omega)  = gamma (n + 1)
  double up = 0.0;    // Gamma(-omega) = gamma n
};
RatePair bath_rate(const BathSpec& bath, double omega, double frequency_tol = 1e-12);

struct BohrChannel {
  double omega = 0.0;  // > 0; S(omega) lowers the energy by omega
  Matrix jump;
};

struct BohrDecomposition {
  std::vector<BohrChannel> channels;  // ascending omega > 0; S(-omega) = S(omega)^dagger implied
  Matrix zero_channel;                // S(0)
  EigenSystem eig;
  double freq_cluster_tol = 0.0;

  Matrix reconstruct() const;
};

// 1e-6 times the largest Bohr gap of the spectrum.
double default_cluster_tol(const EigenSystem& eig);

// Groups of level pairs whose Bohr gaps chain within tol. Shared with the perturbative expansion.
struct GapCluster {
  double omega = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (lower group, upper group)
};
std::vector<GapCluster> cluster_gaps(const EigenSystem& eig,
                                     const std::vector<std::pair<std::size_t, std::size_t>>& pairs, double tol);

BohrDecomposition bohr_decompose(const Matrix& s, const EigenSystem& eig,
                                 std::optional<double> freq_cluster_tol = std::nullopt);

// Reject: a nonzero S(0) that is not proportional to the identity raises ZeroFrequencyChannel.
// Drop: such a channel is omitted. Identity-proportional S(0) never contributes and is always skipped.
enum class ZeroFrequencyPolicy { Reject, Drop };

struct DissipatorChannel {
  double omega = 0.0;
  double rate_down = 0.0;
  double rate_up = 0.0;
  Matrix jump;  // S(omega); the excitation channel uses S(omega)^dagger with rate_up
};

struct Dissipator {
  std::string label;
  double temperature = 0.0;
  Index dim = 0;
  std::vector<DissipatorChannel> channels;

  Superoperator superoperator() const;
};

Dissipator build_dissipator(const BathSpec& bath, const BohrDecomposition& dec,
                            ZeroFrequencyPolicy policy = ZeroFrequencyPolicy::Reject);

struct BuildOptions {
  std::optional<double> freq_cluster_tol;
  std::optional<double> degeneracy_tol;
  ZeroFrequencyPolicy zero_frequency = ZeroFrequencyPolicy::Reject;
};

enum class LiouvillianMode { Vectorized, MatrixFree };

class Liouvillian {
 public:
  Liouvillian(Matrix hamiltonian, std::vector<Dissipator> dissipators,
              LiouvillianMode mode = LiouvillianMode::Vectorized);

  Index dim() const { return hamiltonian_.rows(); }
  LiouvillianMode mode() const { return mode_; }
  const Matrix& hamiltonian() const { return hamiltonian_; }
  const std::vector<Dissipator>& dissipators() const { return dissipators_; }
  const Dissipator& dissipator(std::string_view label) const;
  std::vector<std::string> bath_labels() const;

  const Superoperator& superoperator() const { return full_; }
  // D^alpha alone.
  Superoperator bath_superoperator(std::string_view label) const;
  // -i[H, .] + D^alpha
  Liouvillian partial(std::string_view label) const;

  Matrix apply(const Matrix& rho) const;
  Matrix apply_adjoint(const Matrix& x) const;
  // Vectorized generator, built once at construction.
  const SparseMatrix& vectorized() const { return *vectorized_; }
  double norm_estimate() const { return norm_estimate_; }

 private:
  Matrix hamiltonian_;
  std::vector<Dissipator> dissipators_;
  LiouvillianMode mode_;
  Superoperator full_;
  std::shared_ptr<const SparseMatrix> vectorized_;
  double norm_estimate_ = 0.0;
};

Liouvillian build_liouvillian(const Matrix& h, const std::vector<BathSpec>& baths, const BuildOptions& opts = {});
// Dissipators built from the spectrum of h_dissipator while the commutator carries h_commutator.
Liouvillian build_liouvillian_split(const Matrix& h_commutator, const Matrix& h_dissipator,
                                    const std::vector<BathSpec>& baths, const BuildOptions& opts = {});

Matrix apply_adjoint(const Liouvillian& l, const Matrix& a);

// ---- propagation ------------------------------------------------------------

enum class Picture { Schrodinger, Heisenberg };

inline constexpr double kStabilityFactor = 0.1;
double max_stable_dt(const Superoperator& gen);

// Fixed-step RK4 for dX/dt = G X + source (G = L or L^dagger). The generator is vectorized once.
class Propagator {
 public:
  Propagator(const Superoperator& gen, Picture picture, double dt = 0.0);
  Propagator(const Liouvillian& l, Picture picture, double dt = 0.0);

  double dt() const { return dt_; }
  Index dim() const { return dim_; }

  // Advance x by time t >= 0 using ceil(t/dt) equal steps.
  Matrix advance(const Matrix& x, double t, const Matrix* source = nullptr) const;
  // States at ascending checkpoint times starting from x at time 0.
  std::vector<Matrix> trajectory(const Matrix& x, const std::vector<double>& times,
                                 const Matrix* source = nullptr) const;

 private:
  void rk4(Vector& v, double h, int steps, const Vector* source, double reference) const;

  SparseMatrix m_;
  Index dim_ = 0;
  bool transpose_io_ = false;
  double dt_ = 0.0;
};

Matrix propagate(const Liouvillian& l, const Matrix& x, double t, double dt, Picture picture);
Matrix propagate(const Superoperator& gen, const Matrix& x, double t, double dt, Picture picture);

// ||X(dt) - X(dt/2)|| / ||X(dt/2) - X(dt/4)||; close to 16 for a fourth-order scheme.
double rk4_convergence_ratio(const Superoperator& gen, const Matrix& x, double t, double dt, Picture picture);

// ---- steady states ----------------------------------------------------------

enum class SteadyStateMethod { Auto, Nullspace, Longtime, Direct };

struct SteadyStateOptions {
  double residual_tol = 1e-9;  // relative to the generator norm estimate
  double max_time = 1e6;
};

// Nullspace: SVD of the dense vectorized generator (d^2 <= 4096).
// Longtime: RK4 from the maximally mixed state until the residual is below tolerance.
// Direct: sparse LU of the vectorized generator bordered by the trace functional.
// Auto: Nullspace for d^2 <= 256, Direct otherwise.
DensityMatrix steady_state(const Liouvillian& l, SteadyStateMethod method = SteadyStateMethod::Auto,
                           const SteadyStateOptions& opts = {});

// Solves G X = rhs subject to Tr X = trace_value with the bordered sparse system used by Direct.
// rhs must lie in the range of G (for a trace-preserving G, Tr rhs = 0).
Matrix solve_bordered(const Superoperator& gen, const Matrix& rhs, Complex trace_value);
Matrix solve_bordered(const Liouvillian& l, const Matrix& rhs, Complex trace_value);

}  // namespace respond
