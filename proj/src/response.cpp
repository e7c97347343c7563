#include "respond/response.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace respond {

ResponseTrace response_function(const Matrix& a, const Liouvillian& l0, const FirstOrderGenerator& l1,
                                const Matrix& pi0, const std::vector<double>& tau_grid, double dt) {
  const char* op = "response_function";
  require_same_dim(l0.hamiltonian(), a, op);
  require_same_dim(l0.hamiltonian(), pi0, op);
  require_hermitian(a, op, 1e-10);
  const double residual = l0.apply(pi0).norm();
  if (residual > 1e-8 * std::max(l0.norm_estimate(), 1.0)) {
    std::ostringstream msg;
    msg << "reference state residual " << residual << " exceeds 1e-8 ||L0||";
    throw Error(ErrorCode::NotSteady, op, msg.str());
  }
  const Matrix sigma11 = Complex(0.0, -1.0) * commutator(l1.v(), pi0);
  const Matrix sigma12 = l1.dissipative_part().apply(pi0);
  const std::vector<Matrix> at = Propagator(l0, Picture::Heisenberg, dt).trajectory(a, tau_grid);

  ResponseTrace tr;
  tr.tau = tau_grid;
  tr.phi11.reserve(at.size());
  tr.phi12.reserve(at.size());
  tr.phi_total.reserve(at.size());
  double scale = 0.0, worst_imag = 0.0;
  for (const Matrix& x : at) {
    const Complex p11 = trace_product(sigma11, x);
    const Complex p12 = trace_product(sigma12, x);
    scale = std::max({scale, std::abs(p11), std::abs(p12)});
    worst_imag = std::max({worst_imag, std::abs(p11.imag()), std::abs(p12.imag())});
    tr.phi11.push_back(p11.real());
    tr.phi12.push_back(p12.real());
    tr.phi_total.push_back(p11.real() + p12.real());
  }
  if (worst_imag > 1e-9 * std::max(scale, 1.0)) {
    std::ostringstream msg;
    msg << "response has an imaginary part " << worst_imag;
    throw Error(ErrorCode::NonHermitianInput, op, msg.str());
  }
  return tr;
}

std::vector<double> uniform_grid(double t_max, std::size_t n) {
  if (n < 2 || !(t_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "uniform_grid", "need n >= 2 and t_max > 0");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = t_max * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

std::vector<double> default_tau_grid(double kappa_slow, std::size_t n) {
  if (!(kappa_slow > 0.0)) throw Error(ErrorCode::InvalidArgument, "default_tau_grid", "decay rate must be > 0");
  return uniform_grid(std::log(1e7) / kappa_slow, n);
}

namespace {

void check_grid(const std::vector<double>& x, const std::vector<double>& f, const char* op) {
  if (x.size() != f.size()) throw Error(ErrorCode::DimensionMismatch, op, "grid and values differ in length");
  if (x.empty()) throw Error(ErrorCode::InvalidArgument, op, "empty grid");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw Error(ErrorCode::InvalidArgument, op, "grid must be strictly ascending");
}

// int_{x0 + lo}^{x0 + hi} of the parabola through (x0, f0), (x1, f1), (x2, f2), offsets from x0.
double parabola_integral(double x0, double x1, double x2, double f0, double f1, double f2, double lo, double hi) {
  const double h0 = x1 - x0;
  const double h1 = x2 - x1;
  const double c1 = (f1 - f0) / h0;
  const double c2 = ((f2 - f1) / h1 - c1) / (h0 + h1);
  auto prim = [&](double s) { return f0 * s + 0.5 * c1 * s * s + c2 * (s * s * s / 3.0 - 0.5 * h0 * s * s); };
  return prim(hi) - prim(lo);
}

}  // namespace

std::vector<double> cumulative_simpson(const std::vector<double>& x, const std::vector<double>& f) {
  check_grid(x, f, "cumulative_simpson");
  const std::size_t n = x.size();
  std::vector<double> c(n, 0.0);
  if (n == 2) {
    c[1] = 0.5 * (f[0] + f[1]) * (x[1] - x[0]);
    return c;
  }
  std::size_t i = 0;
  for (; i + 2 < n; i += 2) {
    c[i + 1] = c[i] + parabola_integral(x[i], x[i + 1], x[i + 2], f[i], f[i + 1], f[i + 2], 0.0, x[i + 1] - x[i]);
    c[i + 2] = c[i] + parabola_integral(x[i], x[i + 1], x[i + 2], f[i], f[i + 1], f[i + 2], 0.0, x[i + 2] - x[i]);
  }
  if (i + 1 < n) {
    // one interval left: parabola through the last three points
    const std::size_t a = n - 3;
    c[n - 1] = c[n - 2] + parabola_integral(x[a], x[a + 1], x[a + 2], f[a], f[a + 1], f[a + 2], x[a + 1] - x[a],
                                            x[a + 2] - x[a]);
  }
  return c;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& x, const std::vector<double>& f) {
  check_grid(x, f, "cumulative_trapezoid");
  std::vector<double> c(x.size(), 0.0);
  for (std::size_t i = 1; i < x.size(); ++i) c[i] = c[i - 1] + 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
  return c;
}

double integrate_to(const std::vector<double>& x, const std::vector<double>& f, double t, double rel_tol) {
  const char* op = "integrated_response";
  check_grid(x, f, op);
  if (t < x.front() || t > x.back() * (1.0 + 1e-12)) {
    throw Error(ErrorCode::InvalidArgument, op, "t lies outside the grid");
  }
  if (t == x.front() || x.size() == 1) return 0.0;
  std::vector<double> xs, fs, absf;
  for (std::size_t i = 0; i < x.size() && x[i] <= t; ++i) {
    xs.push_back(x[i]);
    fs.push_back(f[i]);
  }
  double simpson = 0.0, trap = 0.0, mass = 0.0;
  if (xs.size() >= 2) {
    simpson = cumulative_simpson(xs, fs).back();
    trap = cumulative_trapezoid(xs, fs).back();
    for (double v : fs) absf.push_back(std::abs(v));
    mass = cumulative_trapezoid(xs, absf).back();
  }
  const std::size_t k = xs.size();
  if (xs.back() < t) {
    // partial interval: parabola through three grid points around it
    const double ft = f[k - 1] + (f[k] - f[k - 1]) * (t - x[k - 1]) / (x[k] - x[k - 1]);
    if (x.size() >= 3) {
      const std::size_t a = std::min(k == 1 ? 0 : k - 2, x.size() - 3);
      simpson += parabola_integral(x[a], x[a + 1], x[a + 2], f[a], f[a + 1], f[a + 2], xs.back() - x[a], t - x[a]);
    } else {
      simpson += 0.5 * (f[k - 1] + ft) * (t - x[k - 1]);
    }
    trap += 0.5 * (f[k - 1] + ft) * (t - x[k - 1]);
    mass += 0.5 * (std::abs(f[k - 1]) + std::abs(ft)) * (t - x[k - 1]);
  }
  if (std::abs(simpson - trap) > rel_tol * mass) {
    std::ostringstream msg;
    msg << "Simpson and trapezoid integrals differ by " << std::abs(simpson - trap) << " (mass " << mass << ")";
    throw Error(ErrorCode::GridTooCoarse, op, msg.str());
  }
  return simpson;
}

IntegratedResponse integrated_response(const ResponseTrace& trace, double t) {
  if (trace.tau.empty() || trace.tau.front() != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "integrated_response", "grid must start at tau = 0");
  }
  return {integrate_to(trace.tau, trace.phi11, t), integrate_to(trace.tau, trace.phi12, t)};
}

namespace {

double max_abs_range(const std::vector<double>& f, std::size_t lo, std::size_t hi) {
  double m = 0.0;
  for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::abs(f[i]));
  return m;
}

// Tail beyond the grid for an integrand decaying like exp(-kappa tau).
double exponential_tail(const std::vector<double>& x, const std::vector<double>& f) {
  const std::size_t n = x.size();
  const std::size_t tenth = std::max<std::size_t>(n / 10, 1);
  if (n < 2 * tenth + 1) return 0.0;
  const double earlier = max_abs_range(f, n - 2 * tenth, n - tenth);
  const double last = max_abs_range(f, n - tenth, n);
  if (!(earlier > 0.0) || !(last > 0.0) || last >= earlier) return 0.0;
  const double span = x[n - tenth] - x[n - 2 * tenth];
  const double kappa = std::log(earlier / last) / span;
  return f.back() / kappa;
}

}  // namespace

SteadyResponse steady_state_response(const ResponseTrace& trace) {
  const char* op = "steady_state_response";
  const std::size_t n = trace.tau.size();
  if (n < 20) throw Error(ErrorCode::InvalidArgument, op, "grid too short for a steady-state response");
  const std::size_t tail_start = n - std::max<std::size_t>(n / 20, 1);
  for (const auto* f : {&trace.phi11, &trace.phi12}) {
    const double peak = max_abs_range(*f, 0, n);
    if (peak == 0.0) continue;
    const double late = max_abs_range(*f, tail_start, n);
    if (late >= 1e-6 * peak) {
      std::ostringstream msg;
      msg << "response has not decayed: max |phi| over the last 5% is " << late / peak << " of its peak";
      throw Error(ErrorCode::NonDecayingResponse, op, msg.str());
    }
  }
  const IntegratedResponse body = integrated_response(trace, trace.tau.back());
  SteadyResponse r;
  r.tail11 = exponential_tail(trace.tau, trace.phi11);
  r.tail12 = exponential_tail(trace.tau, trace.phi12);
  r.phi11 = body.phi11 + r.tail11;
  r.phi12 = body.phi12 + r.tail12;
  r.total = r.phi11 + r.phi12;
  return r;
}

OracleResult finite_difference_oracle(const GeneratorFamily& family, const ObservableFunctional& observable,
                                      const std::vector<double>& deltas, SteadyStateMethod method) {
  const char* op = "finite_difference_oracle";
  if (deltas.size() < 3) throw Error(ErrorCode::InvalidArgument, op, "need at least three delta values");
  std::vector<double> ds = deltas;
  for (double d : ds)
    if (!(d > 0.0)) throw Error(ErrorCode::InvalidArgument, op, "delta values must be > 0");
  std::sort(ds.begin(), ds.end(), std::greater<>());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  if (ds.size() < 3 || ds.front() < 10.0 * ds.back() * (1.0 - 1e-12)) {
    throw Error(ErrorCode::InvalidArgument, op, "delta values must be distinct and span at least a decade");
  }
  auto value_at = [&](double delta) {
    const Liouvillian l = family(delta);
    return observable(l, steady_state(l, method));
  };
  OracleResult out;
  out.deltas = ds;
  for (double d : ds) out.central_differences.push_back((value_at(d) - value_at(-d)) / (2.0 * d));

  // Neville extrapolation to delta^2 = 0
  auto extrapolate = [](const std::vector<double>& x, std::vector<double> y) {
    const std::size_t m = x.size();
    for (std::size_t level = 1; level < m; ++level) {
      for (std::size_t i = 0; i + level < m; ++i) {
        const double xa = x[i], xb = x[i + level];
        y[i] = (xb * y[i] - xa * y[i + 1]) / (xb - xa);
      }
    }
    return y[0];
  };
  std::vector<double> x2;
  for (double d : ds) x2.push_back(d * d);
  out.derivative = extrapolate(x2, out.central_differences);
  const std::vector<double> x2b(x2.begin() + 1, x2.end());
  const std::vector<double> yb(out.central_differences.begin() + 1, out.central_differences.end());
  out.error_estimate = std::abs(out.derivative - extrapolate(x2b, yb));
  return out;
}

ObservableFunctional expectation_functional(Matrix a) {
  return [a = std::move(a)](const Liouvillian&, const DensityMatrix& rho) { return expectation(rho, a).real(); };
}

}  // namespace respond
