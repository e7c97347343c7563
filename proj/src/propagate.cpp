#include "respond/lgks.hpp"

#include <cmath>
#include <sstream>

namespace respond {

double max_stable_dt(const Superoperator& gen) {
  const double norm = gen.norm_estimate();
  return norm > 0.0 ? kStabilityFactor / norm : 1.0;
}

namespace {

double resolve_dt(double requested, double dt_max, const char* op) {
  if (requested <= 0.0) return dt_max;
  if (requested > dt_max * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "dt = " << requested << " exceeds the stability bound " << dt_max;
    throw Error(ErrorCode::InvalidArgument, op, msg.str());
  }
  return requested;
}

}  // namespace

Propagator::Propagator(const Superoperator& gen, Picture picture, double dt) : dim_(gen.dim()) {
  dt_ = resolve_dt(dt, max_stable_dt(gen), "propagate");
  const SparseMatrix m = gen.vectorized();
  if (picture == Picture::Schrodinger) {
    m_ = m;
  } else {
    m_ = m.transpose();
  }
  transpose_io_ = picture == Picture::Heisenberg;
  m_.makeCompressed();
}

Propagator::Propagator(const Liouvillian& l, Picture picture, double dt) : dim_(l.dim()) {
  dt_ = resolve_dt(dt, kStabilityFactor / std::max(l.norm_estimate(), 1e-300), "propagate");
  if (picture == Picture::Schrodinger) {
    m_ = l.vectorized();
  } else {
    m_ = l.vectorized().transpose();
  }
  transpose_io_ = picture == Picture::Heisenberg;
  m_.makeCompressed();
}

void Propagator::rk4(Vector& v, double h, int steps, const Vector* source, double reference) const {
  Vector k1(v.size()), k2(v.size()), k3(v.size()), k4(v.size()), tmp(v.size());
  const double limit = 1e3 * reference;
  for (int s = 0; s < steps; ++s) {
    k1.noalias() = m_ * v;
    if (source) k1 += *source;
    tmp = v + (0.5 * h) * k1;
    k2.noalias() = m_ * tmp;
    if (source) k2 += *source;
    tmp = v + (0.5 * h) * k2;
    k3.noalias() = m_ * tmp;
    if (source) k3 += *source;
    tmp = v + h * k3;
    k4.noalias() = m_ * tmp;
    if (source) k4 += *source;
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!(v.norm() <= limit)) {
      throw Error(ErrorCode::UnstableStep, "propagate", "norm grew beyond 1e3 times its reference value");
    }
  }
}

Matrix Propagator::advance(const Matrix& x, double t, const Matrix* source) const {
  return trajectory(x, {t}, source).back();
}

std::vector<Matrix> Propagator::trajectory(const Matrix& x, const std::vector<double>& times,
                                           const Matrix* source) const {
  const char* op = "propagate";
  if (x.rows() != dim_ || x.cols() != dim_) throw Error(ErrorCode::DimensionMismatch, op, "operator dim mismatch");
  // Heisenberg picture: Tr((L rho) X) = vec(X^T)^T M vec(rho), so X^T evolves with M^T.
  Vector v = transpose_io_ ? vec(x.transpose()) : vec(x);
  Vector src;
  if (source) {
    if (source->rows() != dim_ || source->cols() != dim_)
      throw Error(ErrorCode::DimensionMismatch, op, "source dim mismatch");
    src = transpose_io_ ? vec(source->transpose()) : vec(*source);
  }
  const double t_end = times.empty() ? 0.0 : times.back();
  const double reference = std::max({v.norm(), source ? src.norm() * std::max(1.0, t_end) : 0.0, 1e-300});
  std::vector<Matrix> out;
  out.reserve(times.size());
  double now = 0.0;
  for (double t : times) {
    if (!(t >= now)) throw Error(ErrorCode::InvalidArgument, op, "checkpoint times must be ascending and >= 0");
    const double span = t - now;
    if (span > 0.0) {
      const int steps = static_cast<int>(std::ceil(span / dt_ - 1e-9));
      rk4(v, span / steps, steps, source ? &src : nullptr, reference);
    }
    now = t;
    out.push_back(transpose_io_ ? Matrix(unvec(v, dim_).transpose()) : unvec(v, dim_));
  }
  return out;
}

Matrix propagate(const Liouvillian& l, const Matrix& x, double t, double dt, Picture picture) {
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "propagate", "t must be >= 0");
  if (t == 0.0) return x;
  const Matrix out = Propagator(l, picture, dt).advance(x, t);
  if (picture == Picture::Schrodinger) {
    const double drift = std::abs(out.trace() - x.trace());
    if (drift > 1e-8 * std::max(1.0, std::abs(x.trace()))) {
      throw Error(ErrorCode::UnstableStep, "propagate", "trace drifted by more than 1e-8");
    }
  }
  return out;
}

Matrix propagate(const Superoperator& gen, const Matrix& x, double t, double dt, Picture picture) {
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "propagate", "t must be >= 0");
  if (t == 0.0) return x;
  return Propagator(gen, picture, dt).advance(x, t);
}

double rk4_convergence_ratio(const Superoperator& gen, const Matrix& x, double t, double dt, Picture picture) {
  const Matrix a = propagate(gen, x, t, dt, picture);
  const Matrix b = propagate(gen, x, t, dt / 2.0, picture);
  const Matrix c = propagate(gen, x, t, dt / 4.0, picture);
  return (a - b).norm() / (b - c).norm();
}

}  // namespace respond
