#include "respond/core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace respond {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidDensityMatrix: return "InvalidDensityMatrix";
    case ErrorCode::NonHermitianInput: return "NonHermitianInput";
    case ErrorCode::DecompositionFailure: return "DecompositionFailure";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonlinearAction: return "NonlinearAction";
    case ErrorCode::NonpositiveFrequency: return "NonpositiveFrequency";
    case ErrorCode::ZeroFrequencyChannel: return "ZeroFrequencyChannel";
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::UnstableStep: return "UnstableStep";
    case ErrorCode::NonUniqueSteadyState: return "NonUniqueSteadyState";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::UnresolvedDegeneracy: return "UnresolvedDegeneracy";
    case ErrorCode::EigenvalueShiftPresent: return "EigenvalueShiftPresent";
    case ErrorCode::NotSteady: return "NotSteady";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::NonDecayingResponse: return "NonDecayingResponse";
    case ErrorCode::UnknownBath: return "UnknownBath";
    case ErrorCode::SingularReference: return "SingularReference";
    case ErrorCode::ZeroTemperatureBath: return "ZeroTemperatureBath";
    case ErrorCode::RankDeficientState: return "RankDeficientState";
    case ErrorCode::NotStationaryReference: return "NotStationaryReference";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string operation, const std::string& message)
    : std::runtime_error(std::string(error_name(code)) + " in " + operation + ": " + message),
      code_(code),
      operation_(std::move(operation)) {}

Matrix identity(Index dim) { return Matrix::Identity(dim, dim); }

Matrix dagger(const Matrix& a) { return a.adjoint(); }

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Matrix anticommutator(const Matrix& a, const Matrix& b) { return a * b + b * a; }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix annihilation(Index levels) {
  Matrix a = Matrix::Zero(levels, levels);
  for (Index n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

bool is_finite(const Matrix& a) { return a.allFinite(); }

bool is_hermitian(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = max_abs(a);
  return max_abs(a - a.adjoint()) <= rel_tol * scale;
}

void require_square(const Matrix& a, std::string_view operation) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw Error(ErrorCode::DimensionMismatch, std::string(operation), "operator must be square with dim >= 1");
  }
  if (!is_finite(a)) throw Error(ErrorCode::InvalidArgument, std::string(operation), "operator has non-finite entries");
}

void require_hermitian(const Matrix& a, std::string_view operation, double rel_tol) {
  require_square(a, operation);
  if (!is_hermitian(a, rel_tol)) {
    throw Error(ErrorCode::NonHermitianInput, std::string(operation), "operator is not Hermitian");
  }
}

void require_same_dim(const Matrix& a, const Matrix& b, std::string_view operation) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x" << b.cols();
    throw Error(ErrorCode::DimensionMismatch, std::string(operation), msg.str());
  }
}

Complex trace_product(const Matrix& a, const Matrix& b) {
  // Tr(ab) = sum_ij a_ij b_ji
  return (a.array() * b.transpose().array()).sum();
}

double EigenSystem::group_energy(std::size_t g) const {
  double sum = 0.0;
  for (Index i : groups[g]) sum += values[i];
  return sum / static_cast<double>(groups[g].size());
}

Matrix EigenSystem::to_eigenbasis(const Matrix& a) const { return vectors.adjoint() * a * vectors; }

Matrix EigenSystem::from_eigenbasis(const Matrix& a) const { return vectors * a * vectors.adjoint(); }

void assign_groups(EigenSystem& eig, double degeneracy_tol) {
  eig.degeneracy_tol = degeneracy_tol;
  eig.groups.clear();
  eig.group_of.assign(static_cast<std::size_t>(eig.values.size()), 0);
  for (Index i = 0; i < eig.values.size(); ++i) {
    if (i == 0 || std::abs(eig.values[i] - eig.values[i - 1]) > degeneracy_tol) eig.groups.emplace_back();
    eig.groups.back().push_back(i);
    eig.group_of[static_cast<std::size_t>(i)] = static_cast<Index>(eig.groups.size() - 1);
  }
}

EigenSystem eigendecompose_hermitian(const Matrix& h, std::optional<double> degeneracy_tol) {
  require_hermitian(h, "eigendecompose_hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::DecompositionFailure, "eigendecompose_hermitian", "eigen-solver did not converge");
  }
  EigenSystem eig;
  eig.values = es.eigenvalues();
  eig.vectors = es.eigenvectors();
  const double span = eig.values[eig.values.size() - 1] - eig.values[0];
  const double tol = degeneracy_tol.value_or(span > 0.0 ? 1e-9 * span : 1e-12);
  assign_groups(eig, tol);
  return eig;
}

DensityMatrix::DensityMatrix(Matrix rho) : rho_(std::move(rho)) {
  const char* op = "DensityMatrix";
  require_square(rho_, op);
  if (max_abs(rho_ - rho_.adjoint()) > 1e-10) {
    throw Error(ErrorCode::InvalidDensityMatrix, op, "state is not Hermitian within 1e-10");
  }
  if (std::abs(rho_.trace() - Complex(1.0, 0.0)) > 1e-10) {
    throw Error(ErrorCode::InvalidDensityMatrix, op, "trace differs from 1 by more than 1e-10");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-8) {
    throw Error(ErrorCode::InvalidDensityMatrix, op, "state has an eigenvalue below -1e-8");
  }
}

DensityMatrix normalized_state(const Matrix& rho) {
  Matrix h = 0.5 * (rho + rho.adjoint());
  const Complex tr = h.trace();
  if (std::abs(tr) == 0.0) throw Error(ErrorCode::InvalidDensityMatrix, "normalized_state", "zero trace");
  return DensityMatrix(h / tr.real());
}

DensityMatrix maximally_mixed(Index dim) { return DensityMatrix(identity(dim) / static_cast<double>(dim)); }

DensityMatrix pure_state(const Vector& psi) {
  const double n = psi.norm();
  if (n == 0.0) throw Error(ErrorCode::InvalidArgument, "pure_state", "zero vector");
  const Vector u = psi / n;
  return DensityMatrix(u * u.adjoint());
}

namespace {

RealVector gibbs_log_weights(const RealVector& energies, double temperature) {
  const double e0 = energies.minCoeff();
  RealVector logw = -(energies.array() - e0) / temperature;
  const double log_z = std::log((logw.array().exp()).sum());
  return logw.array() - log_z;
}

}  // namespace

DensityMatrix gibbs_state(const Matrix& h, double temperature) {
  if (!(temperature >= 0.0)) throw Error(ErrorCode::InvalidArgument, "gibbs_state", "temperature must be >= 0");
  const EigenSystem eig = eigendecompose_hermitian(h);
  RealVector w = RealVector::Zero(eig.dim());
  if (temperature == 0.0) {
    for (Index i : eig.groups.front()) w[i] = 1.0 / static_cast<double>(eig.groups.front().size());
  } else {
    w = gibbs_log_weights(eig.values, temperature).array().exp();
  }
  Matrix rho = eig.vectors * w.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

Matrix log_gibbs(const Matrix& h, double temperature) {
  if (!(temperature > 0.0)) {
    throw Error(ErrorCode::SingularReference, "log_gibbs", "zero-temperature Gibbs state has no logarithm");
  }
  const EigenSystem eig = eigendecompose_hermitian(h);
  const RealVector logw = gibbs_log_weights(eig.values, temperature);
  Matrix out = eig.vectors * logw.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  return 0.5 * (out + out.adjoint());
}

Complex expectation(const DensityMatrix& rho, const Matrix& a) {
  require_same_dim(rho.matrix(), a, "expectation");
  return trace_product(rho.matrix(), a);
}

HermitianLog hermitian_log(const Matrix& rho, double floor) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()));
  if (es.info() != Eigen::Success) throw Error(ErrorCode::DecompositionFailure, "hermitian_log", "eigen-solver failed");
  HermitianLog out;
  RealVector p = es.eigenvalues();
  out.min_eigenvalue = p.minCoeff();
  for (Index i = 0; i < p.size(); ++i) {
    if (p[i] < floor) {
      p[i] = floor;
      ++out.clamped;
    }
  }
  RealVector logp = p.array().log();
  out.log = es.eigenvectors() * logp.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  return out;
}

Vector vec(const Matrix& x) { return Eigen::Map<const Vector>(x.data(), x.size()); }

Matrix unvec(const Vector& v, Index dim) {
  if (v.size() != dim * dim) throw Error(ErrorCode::DimensionMismatch, "unvec", "vector length is not dim^2");
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Matrix vectorize_superoperator(const LinearMap& action, Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 3; ++trial) {
    const Matrix x = random_matrix(dim, rng);
    const Matrix y = random_matrix(dim, rng);
    const Complex a(normal(rng), normal(rng));
    const Complex b(normal(rng), normal(rng));
    const Matrix fx = action(x);
    const Matrix fy = action(y);
    const Matrix lhs = action(a * x + b * y);
    const Matrix rhs = a * fx + b * fy;
    const double scale = std::abs(a) * fx.norm() + std::abs(b) * fy.norm() + 1e-300;
    if ((lhs - rhs).norm() > 1e-10 * scale && (lhs - rhs).norm() > 1e-14) {
      throw Error(ErrorCode::NonlinearAction, "vectorize_superoperator", "stochastic linearity check failed");
    }
  }
  const Index n = dim * dim;
  Matrix out(n, n);
  Matrix unit = Matrix::Zero(dim, dim);
  for (Index j = 0; j < dim; ++j) {
    for (Index i = 0; i < dim; ++i) {
      unit(i, j) = 1.0;
      out.col(i + j * dim) = vec(action(unit));
      unit(i, j) = 0.0;
    }
  }
  return out;
}

Matrix random_matrix(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix m(dim, dim);
  for (Index j = 0; j < dim; ++j)
    for (Index i = 0; i < dim; ++i) m(i, j) = Complex(normal(rng), normal(rng));
  return m;
}

Matrix random_hermitian(Index dim, std::mt19937_64& rng) {
  const Matrix m = random_matrix(dim, rng);
  return 0.5 * (m + m.adjoint());
}

DensityMatrix random_density_matrix(Index dim, std::mt19937_64& rng) {
  const Matrix g = random_matrix(dim, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

}  // namespace respond
