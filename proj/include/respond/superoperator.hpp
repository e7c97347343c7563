#pragma once

#include "respond/core.hpp"

#include <Eigen/SparseCore>

#include <vector>

namespace respond {

using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

// weight * left * rho * right^dagger
struct Sandwich {
  double weight = 0.0;
  Matrix left;
  Matrix right;
};

// Linear map of the form  rho -> K rho + rho K^dagger + sum_k w_k A_k rho B_k^dagger.
// Every Lindblad generator and its first-order correction fit this form; the adjoint with respect
// to the bilinear pairing Tr((L rho) X) = Tr(rho L^dagger X) is X -> K^dagger X + X K + sum_k w_k B_k^dagger X A_k.
class Superoperator {
 public:
  Superoperator() = default;
  Superoperator(Matrix k, std::vector<Sandwich> terms);

  static Superoperator zero(Index dim);
  // -i[H, .]
  static Superoperator hamiltonian(const Matrix& h);
  // rate * (L rho L^dagger - 1/2 {L^dagger L, rho})
  static Superoperator lindblad(double rate, const Matrix& jump);

  Index dim() const { return k_.rows(); }
  const Matrix& k() const { return k_; }
  const std::vector<Sandwich>& terms() const { return terms_; }

  Matrix apply(const Matrix& rho) const;
  Matrix apply_adjoint(const Matrix& x) const;

  // Column-stacking superoperator matrix; entries below prune_rel * max|entry| are dropped.
  SparseMatrix vectorized(double prune_rel = 1e-15) const;
  Matrix dense() const;

  // Upper bound on the spectral radius used for step-size control.
  double norm_estimate() const;

  Superoperator& operator+=(const Superoperator& other);
  friend Superoperator operator+(Superoperator a, const Superoperator& b) { return a += b; }
  Superoperator scaled(double factor) const;

 private:
  Matrix k_;
  std::vector<Sandwich> terms_;
};

}  // namespace respond
