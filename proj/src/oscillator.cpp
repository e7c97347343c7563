#include "respond/models.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

namespace respond {

namespace {

void require_finite(double x, const char* name, const char* op) {
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, op, std::string(name) + " must be finite");
}

Matrix dagger_of(const Matrix& m) { return m.adjoint(); }

}  // namespace

void OscillatorParams::validate() const {
  const char* op = "OscillatorParams";
  for (auto [x, name] : {std::pair{omega, "omega"}, {g, "g"}, {epsilon, "epsilon"}, {gamma_plus, "gamma_plus"},
                         {gamma_minus, "gamma_minus"}, {Ta, "Ta"}, {Tb, "Tb"}, {delta, "delta"}}) {
    require_finite(x, name, op);
  }
  if (!(g >= 0.0 && g < omega)) throw Error(ErrorCode::InvalidArgument, op, "need 0 <= g < omega");
  if (!(gamma_plus > 0.0 && gamma_minus > 0.0)) throw Error(ErrorCode::InvalidArgument, op, "rates must be > 0");
  if (!(Ta >= 0.0 && Tb >= 0.0)) throw Error(ErrorCode::InvalidArgument, op, "temperatures must be >= 0");
  if (nmax_plus < 2 || nmax_minus < 2) throw Error(ErrorCode::InvalidArgument, op, "nmax must be >= 2");
}

OscillatorParams oscillator_preset(std::string_view name) {
  OscillatorParams p;
  if (name == "fig2" || name == "fig3") {
    p.omega = 100.0;
    p.g = 90.0;
    p.epsilon = 5.0;
    p.gamma_minus = 1.0;
    p.gamma_plus = 1.0;
    p.delta = 0.02;
    p.Ta = 2000.0;
    p.Tb = name == "fig2" ? 2100.0 : 2050.0;
    return p;
  }
  if (name == "fig2-deskscale") return p;
  throw Error(ErrorCode::InvalidArgument, "oscillator_preset", "unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> oscillator_preset_names() { return {"fig2", "fig3", "fig2-deskscale"}; }

OscillatorOperators oscillator_operators(const OscillatorParams& p) {
  const Index np = p.nmax_plus;
  const Index nm = p.nmax_minus;
  const Index dim = np * nm;
  const double c = p.field_shift();
  OscillatorOperators ops;
  ops.d_plus = kron(annihilation(np), identity(nm)) - c * identity(dim);
  ops.d_minus = kron(identity(np), annihilation(nm));
  const double r = 1.0 / std::sqrt(2.0);
  ops.a = r * (ops.d_plus - ops.d_minus);
  ops.b = r * (ops.d_plus + ops.d_minus);
  ops.ada = ops.a.adjoint() * ops.a;
  ops.x_minus = ops.d_minus + dagger_of(ops.d_minus);
  return ops;
}

double mean_occupation_minus(const OscillatorParams& p) {
  return 0.5 * (bose_occupation(p.omega_minus(), p.Ta) + bose_occupation(p.omega_minus(), p.Tb));
}

double mean_occupation_plus(const OscillatorParams& p) {
  return 0.5 * (bose_occupation(p.omega_plus(), p.Ta) + bose_occupation(p.omega_plus(), p.Tb));
}

OscillatorScenario build_oscillator_scenario(const OscillatorParams& p) {
  const char* op = "build_oscillator_scenario";
  p.validate();
  const double nm = mean_occupation_minus(p);
  const double np = mean_occupation_plus(p);
  if (nm > p.nmax_minus / 4.0 || np > p.nmax_plus / 4.0) {
    std::ostringstream msg;
    msg << "thermal occupations (" << np << ", " << nm << ") exceed a quarter of the truncation (" << p.nmax_plus
        << ", " << p.nmax_minus << ")";
    throw Error(ErrorCode::TruncationTooSmall, op, msg.str());
  }
  OscillatorOperators ops = oscillator_operators(p);
  const Index dim = ops.d_minus.rows();
  const double c = p.field_shift();

  RealVector diag(dim);
  for (Index i = 0; i < p.nmax_plus; ++i)
    for (Index j = 0; j < p.nmax_minus; ++j)
      diag(i * p.nmax_minus + j) = p.omega_plus() * static_cast<double>(i) +
                                   p.omega_minus() * static_cast<double>(j) - p.epsilon * c;
  Matrix h0 = diag.cast<Complex>().asDiagonal();
  Matrix v = p.omega_minus() * ops.x_minus * ops.x_minus * ops.x_minus;

  const RateProfile rates = banded_rate(p.omega, p.gamma_minus, p.gamma_plus);
  std::vector<BathSpec> baths{{"a", ops.a + dagger_of(ops.a), p.Ta, rates},
                              {"b", ops.b + dagger_of(ops.b), p.Tb, rates}};

  std::vector<std::string> warnings;
  const double bound = 0.3 / std::sqrt(static_cast<double>(std::max(p.nmax_plus, p.nmax_minus)));
  if (std::abs(p.delta) > bound) {
    std::ostringstream msg;
    msg << "delta = " << p.delta << " exceeds the truncation bound 0.3 / sqrt(nmax) = " << bound;
    warnings.push_back(msg.str());
  }

  Liouvillian l0 = build_liouvillian(h0, baths);
  FirstOrderGenerator l1 = build_first_order(h0, v, baths);
  return OscillatorScenario{p, std::move(ops), std::move(h0), std::move(v), std::move(baths),
                            std::move(l0), std::move(l1), std::move(warnings)};
}

double oscillator_ada(const OscillatorParams& p) {
  const double c = p.field_shift();
  const double sum = bose_occupation(p.omega_plus(), p.Ta) + bose_occupation(p.omega_plus(), p.Tb) +
                     bose_occupation(p.omega_minus(), p.Ta) + bose_occupation(p.omega_minus(), p.Tb);
  return 0.25 * (sum + 2.0 * c * c);
}

double oscillator_phi11(const OscillatorParams& p, double tau) {
  const double n = mean_occupation_minus(p);
  const double w = p.omega_minus();
  return -3.0 * p.field_shift() * w * (2.0 * n + 1.0) * std::sin(w * tau) * std::exp(-0.5 * p.gamma_minus * tau);
}

double oscillator_phi12(const OscillatorParams& p, double tau) {
  const double n = mean_occupation_minus(p);
  const double w = p.omega_minus();
  return 1.5 * p.field_shift() * p.gamma_minus * (n - 1.0) * (2.0 * n + 1.0) * std::cos(w * tau) *
         std::exp(-0.5 * p.gamma_minus * tau);
}

double oscillator_Phi11_inf(const OscillatorParams& p) {
  const double n = mean_occupation_minus(p);
  const double w2 = 4.0 * p.omega_minus() * p.omega_minus();
  const double g2 = p.gamma_minus * p.gamma_minus;
  return -3.0 * p.field_shift() * (w2 / (g2 + w2)) * (2.0 * n + 1.0);
}

double oscillator_Phi12_inf(const OscillatorParams& p) {
  const double n = mean_occupation_minus(p);
  const double w2 = 4.0 * p.omega_minus() * p.omega_minus();
  const double g2 = p.gamma_minus * p.gamma_minus;
  return 3.0 * p.field_shift() * (g2 / (g2 + w2)) * (n - 1.0) * (2.0 * n + 1.0);
}

std::array<double, 4> oscillator_f_reference(const OscillatorParams& p, double tau) {
  const double c = p.field_shift();
  const double em = std::exp(-0.5 * p.gamma_minus * tau);
  const double es = std::exp(-0.5 * (p.gamma_minus + p.gamma_plus) * tau);
  const double wm = p.omega_minus() * tau;
  const double wg = 2.0 * p.g * tau;
  return {0.5 * c * (std::cos(wm) * em - std::cos(wg) * es), -0.5 * c * (std::sin(wm) * em + std::sin(wg) * es),
          -0.5 * std::cos(wg) * es, -0.5 * std::sin(wg) * es};
}

double oscillator_phi11_closure(const OscillatorParams& p, double tau) {
  const auto f = oscillator_heisenberg_coefficients(p, tau);
  const double k = 6.0 * p.omega_minus() * (2.0 * mean_occupation_minus(p) + 1.0);
  return k * f[kYMinus] - k * p.field_shift() * f[kV];
}

double oscillator_phi12_closure(const OscillatorParams& p, double tau) {
  const auto f = oscillator_heisenberg_coefficients(p, tau);
  const double k = 3.0 * p.gamma_minus * (2.0 * mean_occupation_minus(p) + 1.0);
  return -k * f[kXMinus] + k * p.field_shift() * f[kU];
}

double oscillator_Phi12_inf_closure(const OscillatorParams& p) {
  const double n = mean_occupation_minus(p);
  const double w2 = 4.0 * p.omega_minus() * p.omega_minus();
  const double g2 = p.gamma_minus * p.gamma_minus;
  return -3.0 * p.field_shift() * (g2 / (g2 + w2)) * (2.0 * n + 1.0);
}

std::vector<double> oscillator_reference(OscillatorQuantity q, const OscillatorParams& p, double tau) {
  switch (q) {
    case OscillatorQuantity::Ada:
      return {oscillator_ada(p)};
    case OscillatorQuantity::Phi11:
      return {oscillator_phi11(p, tau)};
    case OscillatorQuantity::Phi12:
      return {oscillator_phi12(p, tau)};
    case OscillatorQuantity::Phi11Inf:
      return {oscillator_Phi11_inf(p)};
    case OscillatorQuantity::Phi12Inf:
      return {oscillator_Phi12_inf(p)};
    case OscillatorQuantity::FCoeffs: {
      const auto f = oscillator_f_reference(p, tau);
      return {f.begin(), f.end()};
    }
  }
  return {};
}

RealMatrix oscillator_closure_generator(const OscillatorParams& p) {
  const double wm = p.omega_minus();
  const double wp = p.omega_plus();
  const double gm = p.gamma_minus;
  const double gp = p.gamma_plus;
  const double c = p.field_shift();
  const double split = wp - wm;
  const double mixed = 0.5 * (gp + gm);
  RealMatrix g = RealMatrix::Zero(9, 9);
  g(kNMinus, kNMinus) = -gm;
  g(kNMinus, kOne) = gm * mean_occupation_minus(p);
  g(kXMinus, kXMinus) = -0.5 * gm;
  g(kXMinus, kYMinus) = -wm;
  g(kYMinus, kXMinus) = wm;
  g(kYMinus, kYMinus) = -0.5 * gm;
  g(kU, kU) = -mixed;
  g(kU, kV) = split;
  g(kU, kXMinus) = -0.5 * c * gp;
  g(kU, kYMinus) = c * wp;
  g(kV, kU) = -split;
  g(kV, kV) = -mixed;
  g(kV, kXMinus) = -c * wp;
  g(kV, kYMinus) = -0.5 * c * gp;
  g(kNPlus, kNPlus) = -gp;
  g(kNPlus, kXPlus) = -0.5 * c * gp;
  g(kNPlus, kYPlus) = c * wp;
  g(kNPlus, kOne) = gp * mean_occupation_plus(p);
  g(kXPlus, kXPlus) = -0.5 * gp;
  g(kXPlus, kYPlus) = -wp;
  g(kXPlus, kOne) = -c * gp;
  g(kYPlus, kXPlus) = wp;
  g(kYPlus, kYPlus) = -0.5 * gp;
  g(kYPlus, kOne) = 2.0 * c * wp;
  return g;
}

std::array<Matrix, 9> oscillator_closure_operators(const OscillatorParams& p) {
  const OscillatorOperators ops = oscillator_operators(p);
  const Complex i(0.0, 1.0);
  const Matrix& dm = ops.d_minus;
  const Matrix& dp = ops.d_plus;
  const Matrix cross = dp.adjoint() * dm;
  return {dm.adjoint() * dm,
          dm + dm.adjoint(),
          i * (dm - dm.adjoint()),
          cross + cross.adjoint(),
          i * (cross - cross.adjoint()),
          dp.adjoint() * dp,
          dp + dp.adjoint(),
          i * (dp - dp.adjoint()),
          identity(dm.rows())};
}

std::array<double, 9> oscillator_heisenberg_coefficients(const OscillatorParams& p, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::InvalidArgument, "oscillator_heisenberg_coefficients", "t must be finite and >= 0");
  }
  RealVector f0 = RealVector::Zero(9);
  f0(kNMinus) = 0.5;
  f0(kU) = -0.5;
  f0(kNPlus) = 0.5;
  const RealMatrix gt = oscillator_closure_generator(p).transpose() * t;
  const RealVector f = gt.exp() * f0;
  std::array<double, 9> out{};
  for (int k = 0; k < 9; ++k) out[static_cast<std::size_t>(k)] = f(k);
  return out;
}

TruncationCheck oscillator_truncation_check(const OscillatorParams& p, double rel_tol) {
  auto value_at = [](const OscillatorParams& q) {
    const OscillatorScenario s = build_oscillator_scenario(q);
    const DensityMatrix ness = steady_state(s.l0);
    return expectation(ness, s.ops.ada).real();
  };
  OscillatorParams larger = p;
  larger.nmax_plus += 2;
  larger.nmax_minus += 2;
  TruncationCheck out;
  out.value = value_at(p);
  out.value_larger = value_at(larger);
  out.relative_change = std::abs(out.value_larger - out.value) / std::max(std::abs(out.value_larger), 1e-300);
  if (out.relative_change > rel_tol) {
    std::ostringstream msg;
    msg << "<a^dagger a> changes by " << out.relative_change << " relative when nmax grows by 2";
    throw Error(ErrorCode::TruncationTooSmall, "oscillator_truncation_check", msg.str());
  }
  return out;
}

}  // namespace respond
