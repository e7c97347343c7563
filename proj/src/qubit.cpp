#include "respond/models.hpp"

#include <cmath>

namespace respond {

void QubitParams::validate() const {
  const char* op = "QubitParams";
  for (double x : {omega, g, gamma_plus, gamma_minus, Omega, Ta, Tb, delta}) {
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidArgument, op, "parameters must be finite");
  }
  if (!(g >= 0.0 && g < omega)) throw Error(ErrorCode::InvalidArgument, op, "need 0 <= g < omega");
  if (!(gamma_plus > 0.0 && gamma_minus > 0.0)) throw Error(ErrorCode::InvalidArgument, op, "rates must be > 0");
  if (!(Ta >= 0.0 && Tb >= 0.0)) throw Error(ErrorCode::InvalidArgument, op, "temperatures must be >= 0");
}

QubitParams qubit_preset(std::string_view name) {
  QubitParams p;
  if (name == "fig4-low-T") return p;
  if (name == "fig4-high-T") {
    p.Ta = 5010.0;
    p.Tb = 4990.0;
    return p;
  }
  throw Error(ErrorCode::InvalidArgument, "qubit_preset", "unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> qubit_preset_names() { return {"fig4-low-T", "fig4-high-T"}; }

QubitOperators qubit_operators() {
  Matrix sz(2, 2), sm(2, 2);
  sz << -1.0, 0.0, 0.0, 1.0;
  sm << 0.0, 1.0, 0.0, 0.0;
  const Matrix sp = sm.adjoint();
  const Matrix sx = sm + sp;
  const Matrix sy = Complex(0.0, 1.0) * (sm - sp);
  const Matrix i2 = identity(2);
  QubitOperators q;
  q.sx_a = kron(sx, i2);
  q.sy_a = kron(sy, i2);
  q.sz_a = kron(sz, i2);
  q.sm_a = kron(sm, i2);
  q.sx_b = kron(i2, sx);
  q.sy_b = kron(i2, sy);
  q.sz_b = kron(i2, sz);
  q.sm_b = kron(i2, sm);
  q.a_plus = 0.5 * (q.sm_a - q.sz_a * q.sm_b);
  q.a_minus = 0.5 * (q.sm_a + q.sz_a * q.sm_b);
  q.b_plus = 0.5 * (q.sm_b - q.sm_a * q.sz_b);
  q.b_minus = 0.5 * (q.sm_b + q.sm_a * q.sz_b);
  const double r = 1.0 / std::sqrt(2.0);
  q.ket00 = Vector::Unit(4, 0);
  q.ket11 = Vector::Unit(4, 3);
  q.ket_plus = r * (Vector::Unit(4, 1) + Vector::Unit(4, 2));
  q.ket_minus = r * (Vector::Unit(4, 1) - Vector::Unit(4, 2));
  return q;
}

namespace {

RateProfile qubit_rates(const QubitParams& p) { return banded_rate(p.omega, p.gamma_minus, p.gamma_plus); }

Matrix qubit_h0(const QubitParams& p, const QubitOperators& q) {
  return 0.5 * p.omega * (q.sz_a + q.sz_b) + 0.5 * p.g * (q.sx_a * q.sx_b + q.sy_a * q.sy_b);
}

}  // namespace

QubitScenario build_qubit_scenario(const QubitParams& p) {
  p.validate();
  QubitOperators q = qubit_operators();
  Matrix h0 = qubit_h0(p, q);
  Matrix v = p.Omega * q.sz_a * q.sz_b;
  const RateProfile rates = qubit_rates(p);
  std::vector<BathSpec> baths{{"a", q.sx_a, p.Ta, rates}, {"b", q.sx_b, p.Tb, rates}};
  Liouvillian l0 = build_liouvillian(h0, baths);
  return QubitScenario{p, std::move(q), std::move(h0), std::move(v), std::move(baths), std::move(l0)};
}

double qubit_j0(const QubitParams& p) {
  const double wp = p.omega_plus();
  const double wm = p.omega_minus();
  const double npa = bose_occupation(wp, p.Ta), npb = bose_occupation(wp, p.Tb);
  const double nma = bose_occupation(wm, p.Ta), nmb = bose_occupation(wm, p.Tb);
  return p.gamma_plus * wp * (npa - npb) / (4.0 * (npa + npb + 1.0)) +
         p.gamma_minus * wm * (nma - nmb) / (4.0 * (nma + nmb + 1.0));
}

double qubit_j1(const QubitParams& p) {
  const double npa = bose_occupation(p.omega_plus(), p.Ta), npb = bose_occupation(p.omega_plus(), p.Tb);
  const double nma = bose_occupation(p.omega_minus(), p.Ta), nmb = bose_occupation(p.omega_minus(), p.Tb);
  return -(p.gamma_minus * p.Omega * (nma - nmb) + p.gamma_plus * p.Omega * (npa - npb)) /
         (2.0 * (nma + nmb + 1.0) * (npa + npb + 1.0));
}

double qubit_reference(QubitQuantity q, const QubitParams& p) {
  return q == QubitQuantity::J0 ? qubit_j0(p) : qubit_j1(p);
}

std::vector<QubitGlobalChannel> qubit_global_channels(const QubitParams& p) {
  const QubitOperators q = qubit_operators();
  const double r = 1.0 / std::sqrt(2.0);
  const double shift = 2.0 * p.delta * p.Omega;
  const RateProfile rates = qubit_rates(p);
  std::vector<QubitGlobalChannel> out;
  auto add = [&](double omega, const Vector& bra_target, const Vector& ket_source) {
    out.push_back({omega, rates(omega), r * bra_target * ket_source.adjoint()});
  };
  add(p.omega_minus() - shift, q.ket00, q.ket_minus);
  add(p.omega_plus() - shift, q.ket00, q.ket_plus);
  add(p.omega_minus() + shift, q.ket_plus, q.ket11);
  add(p.omega_plus() + shift, q.ket_minus, q.ket11);
  return out;
}

Liouvillian build_perturbed_qubit_global(const QubitParams& p) {
  const char* op = "build_perturbed_qubit_global";
  p.validate();
  const QubitOperators q = qubit_operators();
  const auto channels = qubit_global_channels(p);
  // Signs of S_j in sigma_x^A and sigma_x^B for this basis.
  const double sign_a[4] = {-1.0, 1.0, 1.0, 1.0};
  const double sign_b[4] = {1.0, 1.0, 1.0, -1.0};
  std::vector<Dissipator> dissipators;
  for (const auto& [label, temperature, signs] :
       {std::tuple{"a", p.Ta, sign_a}, std::tuple{"b", p.Tb, sign_b}}) {
    Dissipator d{label, temperature, 4, {}};
    for (std::size_t j = 0; j < channels.size(); ++j) {
      const auto& ch = channels[j];
      if (!(ch.omega > 0.0)) throw Error(ErrorCode::NonpositiveFrequency, op, "channel frequency must be > 0");
      const double n = bose_occupation(ch.omega, temperature);
      d.channels.push_back({ch.omega, ch.gamma * (n + 1.0), ch.gamma * n, signs[j] * ch.s});
    }
    dissipators.push_back(std::move(d));
  }
  return Liouvillian(qubit_h0(p, q) + p.delta * p.Omega * q.sz_a * q.sz_b, std::move(dissipators));
}

double qubit_global_current(const QubitParams& p, const Matrix& rho) {
  double j = 0.0;
  for (const auto& ch : qubit_global_channels(p)) {
    const double n = bose_occupation(ch.omega, p.Ta);
    const double lowered = trace_product(rho, ch.s.adjoint() * ch.s).real();
    const double raised = trace_product(rho, ch.s * ch.s.adjoint()).real();
    j += ch.omega * (-ch.gamma * (n + 1.0) * lowered + ch.gamma * n * raised);
  }
  return j;
}

}  // namespace respond
