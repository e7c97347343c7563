#include "respond/superoperator.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace respond {

Superoperator::Superoperator(Matrix k, std::vector<Sandwich> terms) : k_(std::move(k)), terms_(std::move(terms)) {
  require_square(k_, "Superoperator");
  for (const auto& t : terms_) {
    require_same_dim(k_, t.left, "Superoperator");
    require_same_dim(k_, t.right, "Superoperator");
  }
}

Superoperator Superoperator::zero(Index dim) { return Superoperator(Matrix::Zero(dim, dim), {}); }

Superoperator Superoperator::hamiltonian(const Matrix& h) {
  return Superoperator(Complex(0.0, -1.0) * h, {});
}

Superoperator Superoperator::lindblad(double rate, const Matrix& jump) {
  Matrix k = -0.5 * rate * (jump.adjoint() * jump);
  return Superoperator(std::move(k), {Sandwich{rate, jump, jump}});
}

Matrix Superoperator::apply(const Matrix& rho) const {
  require_same_dim(k_, rho, "Superoperator::apply");
  Matrix out = k_ * rho;
  out += rho * k_.adjoint();
  for (const auto& t : terms_) out.noalias() += t.weight * (t.left * rho * t.right.adjoint());
  return out;
}

Matrix Superoperator::apply_adjoint(const Matrix& x) const {
  require_same_dim(k_, x, "Superoperator::apply_adjoint");
  Matrix out = k_.adjoint() * x;
  out += x * k_;
  for (const auto& t : terms_) out.noalias() += t.weight * (t.right.adjoint() * x * t.left);
  return out;
}

namespace {

using Triplet = Eigen::Triplet<Complex>;

// Appends weight * (b (x) a) in sparse form, skipping entries negligible within each factor.
void append_kron(std::vector<Triplet>& out, Complex weight, const Matrix& b, const Matrix& a) {
  const Index d = a.rows();
  const double tol_a = 1e-15 * max_abs(a);
  const double tol_b = 1e-15 * max_abs(b);
  std::vector<std::pair<Index, Index>> nz_a;
  for (Index s = 0; s < d; ++s)
    for (Index r = 0; r < d; ++r)
      if (std::abs(a(r, s)) > tol_a) nz_a.emplace_back(r, s);
  for (Index q = 0; q < d; ++q) {
    for (Index p = 0; p < d; ++p) {
      const Complex bpq = b(p, q);
      if (std::abs(bpq) <= tol_b) continue;
      const Complex f = weight * bpq;
      for (const auto& [r, s] : nz_a) out.emplace_back(r + p * d, s + q * d, f * a(r, s));
    }
  }
}

}  // namespace

SparseMatrix Superoperator::vectorized(double prune_rel) const {
  const Index d = dim();
  const Index n = d * d;
  const Matrix eye = identity(d);
  std::vector<Triplet> trip;
  append_kron(trip, 1.0, eye, k_);
  append_kron(trip, 1.0, k_.conjugate(), eye);
  SparseMatrix total(n, n);
  total.setFromTriplets(trip.begin(), trip.end());
  for (const auto& t : terms_) {
    trip.clear();
    append_kron(trip, t.weight, t.right.conjugate(), t.left);
    SparseMatrix part(n, n);
    part.setFromTriplets(trip.begin(), trip.end());
    total += part;
  }
  if (prune_rel > 0.0 && total.nonZeros() > 0) {
    double ref = 0.0;
    for (Index j = 0; j < total.outerSize(); ++j)
      for (SparseMatrix::InnerIterator it(total, j); it; ++it) ref = std::max(ref, std::abs(it.value()));
    total.prune([&](const Index&, const Index&, const Complex& v) { return std::abs(v) > prune_rel * ref; });
  }
  total.makeCompressed();
  return total;
}

Matrix Superoperator::dense() const { return Matrix(vectorized(0.0)); }

double Superoperator::norm_estimate() const {
  const Index d = dim();
  // Hermitian part of i K is the effective Hamiltonian; a constant shift of it does not change the map.
  const Matrix h = Complex(0.0, 0.5) * (k_ - k_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  const double shift = 0.5 * (es.eigenvalues().minCoeff() + es.eigenvalues().maxCoeff());
  const Matrix k_shifted = k_ + Complex(0.0, shift) * identity(d);
  double est = 2.0 * spectral_norm(k_shifted);
  for (const auto& t : terms_) est += std::abs(t.weight) * spectral_norm(t.left) * spectral_norm(t.right);
  return est;
}

Superoperator& Superoperator::operator+=(const Superoperator& other) {
  if (k_.size() == 0) {
    *this = other;
    return *this;
  }
  require_same_dim(k_, other.k_, "Superoperator::operator+=");
  k_ += other.k_;
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

Superoperator Superoperator::scaled(double factor) const {
  Superoperator out = *this;
  out.k_ *= factor;
  for (auto& t : out.terms_) t.weight *= factor;
  return out;
}

}  // namespace respond
