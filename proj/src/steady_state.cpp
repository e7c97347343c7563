#include "respond/lgks.hpp"

#include <Eigen/SVD>
#include <Eigen/SparseLU>

#include <cmath>
#include <sstream>

namespace respond {

namespace {

using Triplet = Eigen::Triplet<Complex>;

// [[M, u], [t^T, 0]] with t the trace functional and u = t; nonsingular when the kernel of M is one-dimensional.
SparseMatrix bordered_matrix(const SparseMatrix& m, Index d) {
  const Index n = d * d;
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(m.nonZeros() + 2 * d));
  for (Index j = 0; j < m.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(m, j); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
  for (Index i = 0; i < d; ++i) {
    trip.emplace_back(n, i + i * d, 1.0);
    trip.emplace_back(i + i * d, n, 1.0);
  }
  SparseMatrix b(n + 1, n + 1);
  b.setFromTriplets(trip.begin(), trip.end());
  b.makeCompressed();
  return b;
}

Matrix solve_bordered_impl(const SparseMatrix& m, Index d, const Matrix& rhs, Complex trace_value, const char* op) {
  const Index n = d * d;
  const SparseMatrix b = bordered_matrix(m, d);
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(b);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorCode::NonUniqueSteadyState, op, "bordered generator is singular: the stationary state is not unique");
  }
  Vector r(n + 1);
  r.head(n) = vec(rhs);
  r(n) = trace_value;
  const Vector x = lu.solve(r);
  if (lu.info() != Eigen::Success || !x.allFinite()) {
    throw Error(ErrorCode::NonUniqueSteadyState, op, "sparse solve failed");
  }
  const double scale = std::max({r.norm(), 1.0});
  const double residual = (b * x - r).norm();
  if (!(residual <= 1e-8 * scale)) {
    std::ostringstream msg;
    msg << "bordered solve residual " << residual << " is not small; the kernel is degenerate";
    throw Error(ErrorCode::NonUniqueSteadyState, op, msg.str());
  }
  // The multiplier absorbs the trace of rhs; a nonzero value means rhs is outside the range of the generator.
  if (std::abs(x(n)) > 1e-8 * scale) {
    throw Error(ErrorCode::InvalidArgument, op, "right-hand side has a component outside the generator range");
  }
  return unvec(x.head(n), d);
}

DensityMatrix to_state(const Matrix& rho, const char* op) {
  try {
    return normalized_state(rho);
  } catch (const Error& e) {
    throw Error(ErrorCode::NonUniqueSteadyState, op, std::string("kernel vector is not a valid state: ") + e.what());
  }
}

DensityMatrix nullspace_method(const Liouvillian& l) {
  const char* op = "steady_state";
  const Index d = l.dim();
  if (d * d > 4096) throw Error(ErrorCode::InvalidArgument, op, "nullspace method is limited to d^2 <= 4096");
  const Matrix m = Matrix(l.vectorized());
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const RealVector& s = svd.singularValues();
  const Index n = s.size();
  if (n >= 2 && s(n - 2) < 1e-10 * s(0)) {
    throw Error(ErrorCode::NonUniqueSteadyState, op, "generator kernel has dimension greater than one");
  }
  Matrix rho = unvec(svd.matrixV().col(n - 1), d);
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-12) throw Error(ErrorCode::NonUniqueSteadyState, op, "kernel vector is traceless");
  rho /= tr;
  return to_state(rho, op);
}

DensityMatrix longtime_method(const Liouvillian& l, const SteadyStateOptions& opts) {
  const char* op = "steady_state";
  const Index d = l.dim();
  const Propagator prop(l, Picture::Schrodinger);
  const double target = opts.residual_tol * l.norm_estimate();
  Matrix rho = maximally_mixed(d).matrix();
  double t = 0.0;
  double chunk = 100.0 * prop.dt();
  double best = std::numeric_limits<double>::infinity();
  int stalled = 0;
  while (t < opts.max_time) {
    const double step = std::min(chunk, opts.max_time - t);
    rho = prop.advance(rho, step);
    t += step;
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace();
    const double residual = l.apply(rho).norm();
    if (residual < target) return to_state(rho, op);
    if (residual < 0.99 * best) {
      best = residual;
      stalled = 0;
    } else if (++stalled >= 20) {
      throw Error(ErrorCode::NoConvergence, op, "residual stalled before reaching tolerance");
    }
    chunk *= 1.5;
  }
  throw Error(ErrorCode::NoConvergence, op, "maximum propagation time reached");
}

}  // namespace

Matrix solve_bordered(const Superoperator& gen, const Matrix& rhs, Complex trace_value) {
  require_same_dim(gen.k(), rhs, "solve_bordered");
  return solve_bordered_impl(gen.vectorized(), gen.dim(), rhs, trace_value, "solve_bordered");
}

Matrix solve_bordered(const Liouvillian& l, const Matrix& rhs, Complex trace_value) {
  require_same_dim(l.hamiltonian(), rhs, "solve_bordered");
  return solve_bordered_impl(l.vectorized(), l.dim(), rhs, trace_value, "solve_bordered");
}

DensityMatrix steady_state(const Liouvillian& l, SteadyStateMethod method, const SteadyStateOptions& opts) {
  const Index d = l.dim();
  if (method == SteadyStateMethod::Auto) method = d * d <= 256 ? SteadyStateMethod::Nullspace : SteadyStateMethod::Direct;
  switch (method) {
    case SteadyStateMethod::Nullspace:
      return nullspace_method(l);
    case SteadyStateMethod::Longtime:
      return longtime_method(l, opts);
    case SteadyStateMethod::Direct:
    default: {
      const Matrix rho = solve_bordered_impl(l.vectorized(), d, Matrix::Zero(d, d), 1.0, "steady_state");
      return to_state(rho, "steady_state");
    }
  }
}

}  // namespace respond
