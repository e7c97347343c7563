#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace respond {

// Units throughout: hbar = k_B = 1, energies and rates in units of a reference rate gamma.

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class ErrorCode {
  InvalidArgument,
  InvalidDensityMatrix,
  NonHermitianInput,
  DecompositionFailure,
  DimensionMismatch,
  NonlinearAction,
  NonpositiveFrequency,
  ZeroFrequencyChannel,
  NegativeRate,
  UnstableStep,
  NonUniqueSteadyState,
  NoConvergence,
  UnresolvedDegeneracy,
  EigenvalueShiftPresent,
  NotSteady,
  GridTooCoarse,
  NonDecayingResponse,
  UnknownBath,
  SingularReference,
  ZeroTemperatureBath,
  RankDeficientState,
  NotStationaryReference,
  TruncationTooSmall,
  ParseError,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string operation, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  const std::string& operation() const noexcept { return operation_; }

 private:
  ErrorCode code_;
  std::string operation_;
};

// ---- operator algebra -------------------------------------------------------

Matrix identity(Index dim);
Matrix dagger(const Matrix& a);
Matrix commutator(const Matrix& a, const Matrix& b);
Matrix anticommutator(const Matrix& a, const Matrix& b);
Matrix kron(const Matrix& a, const Matrix& b);
// Truncated bosonic lowering operator on levels 0..levels-1.
Matrix annihilation(Index levels);

double max_abs(const Matrix& a);
double spectral_norm(const Matrix& a);
bool is_finite(const Matrix& a);
bool is_hermitian(const Matrix& a, double rel_tol = 1e-12);
void require_hermitian(const Matrix& a, std::string_view operation, double rel_tol = 1e-12);
void require_square(const Matrix& a, std::string_view operation);
void require_same_dim(const Matrix& a, const Matrix& b, std::string_view operation);

// Tr(a b) without forming the product.
Complex trace_product(const Matrix& a, const Matrix& b);

// ---- eigensystems -----------------------------------------------------------

struct EigenSystem {
  RealVector values;                       // ascending
  Matrix vectors;                          // columns are eigenvectors
  std::vector<std::vector<Index>> groups;  // degenerate index sets, ascending energy
  std::vector<Index> group_of;             // level -> group
  double degeneracy_tol = 0.0;

  Index dim() const { return values.size(); }
  double group_energy(std::size_t g) const;
  // Operator expressed in the eigenbasis: U^dagger A U.
  Matrix to_eigenbasis(const Matrix& a) const;
  Matrix from_eigenbasis(const Matrix& a) const;
};

// Default degeneracy tolerance is 1e-9 times the spectral span (absolute 1e-12 for a flat spectrum).
EigenSystem eigendecompose_hermitian(const Matrix& h, std::optional<double> degeneracy_tol = std::nullopt);

// Rebuild the degeneracy grouping of an eigensystem whose basis was modified.
void assign_groups(EigenSystem& eig, double degeneracy_tol);

// ---- states -----------------------------------------------------------------

class DensityMatrix {
 public:
  // Validates: Hermitian within 1e-10, unit trace within 1e-10, eigenvalues >= -1e-8.
  explicit DensityMatrix(Matrix rho);

  const Matrix& matrix() const { return rho_; }
  Index dim() const { return rho_.rows(); }

 private:
  Matrix rho_;
};

// Hermitian projection and trace normalization followed by validation.
DensityMatrix normalized_state(const Matrix& rho);
DensityMatrix maximally_mixed(Index dim);
DensityMatrix pure_state(const Vector& psi);
// Gibbs state exp(-H/T)/Z; T = 0 gives the uniform mixture over the ground group.
DensityMatrix gibbs_state(const Matrix& h, double temperature);
// ln of the Gibbs state evaluated from the spectrum of H, without clamping.
Matrix log_gibbs(const Matrix& h, double temperature);

Complex expectation(const DensityMatrix& rho, const Matrix& a);

struct HermitianLog {
  Matrix log;
  int clamped = 0;
  double min_eigenvalue = 0.0;
};
// Matrix logarithm of a positive semidefinite matrix; eigenvalues below floor are clamped to floor.
HermitianLog hermitian_log(const Matrix& rho, double floor = 1e-14);

// ---- vectorization (column stacking: vec(X)[i + j*d] = X(i, j)) -------------

Vector vec(const Matrix& x);
Matrix unvec(const Vector& v, Index dim);

using LinearMap = std::function<Matrix(const Matrix&)>;
// Dense d^2 x d^2 matrix of a linear map; linearity is checked on random pairs first.
Matrix vectorize_superoperator(const LinearMap& action, Index dim, std::uint64_t seed = 20240611);

// ---- random test objects ----------------------------------------------------

Matrix random_matrix(Index dim, std::mt19937_64& rng);
Matrix random_hermitian(Index dim, std::mt19937_64& rng);
// Full-rank density matrix from a Ginibre sample.
DensityMatrix random_density_matrix(Index dim, std::mt19937_64& rng);

// ---- plain-text matrix format: "dim" then dim^2 lines "row col re im" -------

void write_matrix(std::ostream& out, const Matrix& a);
Matrix read_matrix(std::istream& in);

}  // namespace respond
