#include "respond/perturb.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace respond {

namespace {

Index group_start(const EigenSystem& eig, std::size_t g) { return eig.groups[g].front(); }
Index group_size(const EigenSystem& eig, std::size_t g) { return static_cast<Index>(eig.groups[g].size()); }

}  // namespace

PerturbationExpansion first_order_corrections(const EigenSystem& eig, const Matrix& v) {
  const char* op = "first_order_corrections";
  require_hermitian(v, op, 1e-10);
  const Index d = eig.dim();
  if (v.rows() != d) throw Error(ErrorCode::DimensionMismatch, op, "V and eigensystem dims differ");

  PerturbationExpansion exp;
  exp.basis = eig;
  exp.v_norm = spectral_norm(v);
  Matrix& u = exp.basis.vectors;
  Matrix vb = u.adjoint() * v * u;
  for (std::size_t g = 0; g < eig.groups.size(); ++g) {
    const Index m = group_size(eig, g);
    if (m < 2) continue;
    const Index s = group_start(eig, g);
    const Matrix block = 0.5 * (vb.block(s, s, m, m) + vb.block(s, s, m, m).adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(block);
    if (es.info() != Eigen::Success) throw Error(ErrorCode::DecompositionFailure, op, "group diagonalization failed");
    u.middleCols(s, m) = (u.middleCols(s, m) * es.eigenvectors()).eval();
    exp.degenerate_blocks.push_back(g);
  }
  if (!exp.degenerate_blocks.empty()) vb = u.adjoint() * v * u;
  exp.v_basis = vb;

  exp.e1.resize(d);
  for (Index n = 0; n < d; ++n) exp.e1(n) = vb(n, n).real();

  const double scale = std::max(exp.v_norm, 1e-300);
  for (std::size_t g : exp.degenerate_blocks) {
    const Index m = group_size(eig, g);
    const Index s = group_start(eig, g);
    const double eg = eig.group_energy(g);
    for (Index i = s; i < s + m; ++i) {
      for (Index j = s; j < s + m; ++j) {
        if (i == j) continue;
        if (std::abs(vb(i, j)) > 1e-12 * scale) {
          throw Error(ErrorCode::UnresolvedDegeneracy, op, "V is not diagonal inside a degenerate group");
        }
        if (std::abs(exp.e1(i) - exp.e1(j)) > 1e-9 * scale) continue;
        // V leaves i and j degenerate; second-order coupling through outside levels must vanish
        Complex w = 0.0;
        double bound = 0.0;
        for (Index k = 0; k < d; ++k) {
          if (eig.group_of[static_cast<std::size_t>(k)] == static_cast<Index>(g)) continue;
          const double gap = eg - eig.values(k);
          w += vb(i, k) * vb(k, j) / gap;
          bound = std::max(bound, scale * scale / std::abs(gap));
        }
        if (std::abs(w) > 1e-9 * bound) {
          throw Error(ErrorCode::UnresolvedDegeneracy, op,
                      "V does not lift a degeneracy and higher-order coupling mixes the group members");
        }
      }
    }
  }

  exp.psi1 = Matrix::Zero(d, d);
  for (Index n = 0; n < d; ++n) {
    for (Index m = 0; m < d; ++m) {
      if (eig.group_of[static_cast<std::size_t>(m)] == eig.group_of[static_cast<std::size_t>(n)]) continue;
      exp.psi1(m, n) = vb(m, n) / (eig.values(n) - eig.values(m));
    }
  }
  return exp;
}

std::vector<CouplingExpansionChannel> expand_coupling_operators(const PerturbationExpansion& exp,
                                                                const BohrDecomposition& dec, const Matrix& s,
                                                                double shift_tol) {
  const char* op = "expand_coupling_operators";
  const EigenSystem& eig = exp.basis;
  const Index d = eig.dim();
  if (s.rows() != d || dec.eig.dim() != d) throw Error(ErrorCode::DimensionMismatch, op, "dims differ");
  require_hermitian(s, op, 1e-10);
  // A uniform shift leaves the Bohr frequencies unchanged.
  const double spread = exp.e1.size() > 0 ? exp.e1.maxCoeff() - exp.e1.minCoeff() : 0.0;
  if (spread > shift_tol * exp.v_norm) {
    std::ostringstream msg;
    msg << "first-order eigenvalue shifts spread over " << spread
        << " is nonzero; the Bohr frequencies move and the dissipator has no expansion in delta";
    throw Error(ErrorCode::EigenvalueShiftPresent, op, msg.str());
  }

  const Matrix se = eig.vectors.adjoint() * s * eig.vectors;
  const Matrix& ve = exp.v_basis;
  const std::size_t ng = eig.groups.size();

  // P1_g = R_g V P_g + h.c. with R_g = sum_{k outside g} |k><k| / (E_g - E_k).
  // Store P1_g S and S P1_g in the eigenbasis.
  std::vector<Matrix> left(ng), right(ng);
  for (std::size_t g = 0; g < ng; ++g) {
    const Index m = group_size(eig, g);
    const Index st = group_start(eig, g);
    const double eg = eig.group_energy(g);
    Matrix x = Matrix::Zero(d, m);
    for (Index k = 0; k < d; ++k) {
      if (k >= st && k < st + m) continue;
      x.row(k) = ve.block(k, st, 1, m) / (eg - eig.values(k));
    }
    // P1 = X Pg^T + Pg X^dagger where X occupies the columns of g
    Matrix l = x * se.middleRows(st, m);
    l.middleRows(st, m) += x.adjoint() * se;
    Matrix rr = Matrix::Zero(d, d);
    rr.middleCols(st, m) = se * x;
    rr += se.middleCols(st, m) * x.adjoint();
    left[g] = std::move(l);
    right[g] = std::move(rr);
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < ng; ++a)
    for (std::size_t b = a + 1; b < ng; ++b) pairs.emplace_back(a, b);
  const auto clusters = cluster_gaps(eig, pairs, dec.freq_cluster_tol);

  std::vector<CouplingExpansionChannel> raw;
  double s0_scale = 0.0, s1_scale = 0.0;
  for (const auto& cl : clusters) {
    if (cl.omega == 0.0) continue;
    Matrix s0 = Matrix::Zero(d, d);
    Matrix s1 = Matrix::Zero(d, d);
    for (const auto& [a, b] : cl.pairs) {
      const Index sa = group_start(eig, a), ma = group_size(eig, a);
      const Index sb = group_start(eig, b), mb = group_size(eig, b);
      s0.block(sa, sb, ma, mb) += se.block(sa, sb, ma, mb);
      s1.middleCols(sb, mb) += left[a].middleCols(sb, mb);   // P1_a S P_b
      s1.middleRows(sa, ma) += right[b].middleRows(sa, ma);  // P_a S P1_b
    }
    s0_scale = std::max(s0_scale, max_abs(s0));
    s1_scale = std::max(s1_scale, max_abs(s1));
    raw.push_back({cl.omega, std::move(s0), std::move(s1)});
  }
  std::vector<CouplingExpansionChannel> out;
  for (auto& c : raw) {
    const bool keep0 = max_abs(c.s0) > 1e-12 * s0_scale && s0_scale > 0.0;
    const bool keep1 = max_abs(c.s1) > 1e-12 * s1_scale && s1_scale > 0.0;
    if (!keep0 && !keep1) continue;
    if (!keep0) c.s0.setZero();
    if (!keep1) c.s1.setZero();
    out.push_back({c.omega, eig.from_eigenbasis(c.s0), eig.from_eigenbasis(c.s1)});
  }
  return out;
}

Superoperator FirstOrderDissipator::superoperator(Index dim) const {
  Matrix k = Matrix::Zero(dim, dim);
  std::vector<Sandwich> terms;
  for (const auto& c : channels) {
    const Matrix s0d = c.s0.adjoint();
    const Matrix s1d = c.s1.adjoint();
    if (c.rate_down != 0.0) {
      k -= 0.5 * c.rate_down * (s1d * c.s0 + s0d * c.s1);
      terms.push_back({c.rate_down, c.s0, c.s1});
      terms.push_back({c.rate_down, c.s1, c.s0});
    }
    if (c.rate_up != 0.0) {
      k -= 0.5 * c.rate_up * (c.s1 * s0d + c.s0 * s1d);
      terms.push_back({c.rate_up, s0d, s1d});
      terms.push_back({c.rate_up, s1d, s0d});
    }
  }
  return Superoperator(std::move(k), std::move(terms));
}

FirstOrderDissipator build_first_order_dissipator(const BathSpec& bath,
                                                  const std::vector<CouplingExpansionChannel>& channels) {
  FirstOrderDissipator out;
  out.label = bath.label;
  out.temperature = bath.temperature;
  for (const auto& c : channels) {
    if (max_abs(c.s1) == 0.0 || max_abs(c.s0) == 0.0) continue;
    const RatePair r = bath_rate(bath, c.omega);
    out.channels.push_back({c.omega, r.down, r.up, c.s0, c.s1});
  }
  return out;
}

FirstOrderGenerator::FirstOrderGenerator(Matrix v, std::vector<FirstOrderDissipator> dissipators)
    : v_(std::move(v)), dissipators_(std::move(dissipators)) {
  require_hermitian(v_, "FirstOrderGenerator", 1e-10);
  dissipative_ = Superoperator::zero(dim());
  for (const auto& d : dissipators_) dissipative_ += d.superoperator(dim());
  full_ = Superoperator::hamiltonian(v_) + dissipative_;
}

Superoperator FirstOrderGenerator::bath_superoperator(const std::string& label) const {
  for (const auto& d : dissipators_)
    if (d.label == label) return d.superoperator(dim());
  throw Error(ErrorCode::UnknownBath, "FirstOrderGenerator", "no bath labelled '" + label + "'");
}

FirstOrderGenerator build_first_order_generator(const Matrix& v, std::vector<FirstOrderDissipator> d1) {
  return FirstOrderGenerator(v, std::move(d1));
}

FirstOrderGenerator build_first_order(const Matrix& h0, const Matrix& v, const std::vector<BathSpec>& baths,
                                      const BuildOptions& opts) {
  require_same_dim(h0, v, "build_first_order");
  const EigenSystem eig = eigendecompose_hermitian(h0, opts.degeneracy_tol);
  const PerturbationExpansion exp = first_order_corrections(eig, v);
  std::vector<FirstOrderDissipator> d1;
  for (const auto& bath : baths) {
    const BohrDecomposition dec = bohr_decompose(bath.coupling, eig, opts.freq_cluster_tol);
    d1.push_back(build_first_order_dissipator(bath, expand_coupling_operators(exp, dec, bath.coupling)));
  }
  return FirstOrderGenerator(v, std::move(d1));
}

namespace {

void require_steady(const Liouvillian& l0, const Matrix& pi0, const char* op) {
  require_same_dim(l0.hamiltonian(), pi0, op);
  const double residual = l0.apply(pi0).norm();
  if (residual > 1e-8 * std::max(l0.norm_estimate(), 1.0)) {
    std::ostringstream msg;
    msg << "reference state residual " << residual << " exceeds 1e-8 ||L0||";
    throw Error(ErrorCode::NotSteady, op, msg.str());
  }
}

}  // namespace

std::vector<Matrix> first_order_trajectory(const Liouvillian& l0, const FirstOrderGenerator& l1, const Matrix& pi0,
                                           const std::vector<double>& times, double dt) {
  const char* op = "first_order_state";
  require_steady(l0, pi0, op);
  const Matrix source = l1.apply(pi0);
  const Index d = l0.dim();
  return Propagator(l0, Picture::Schrodinger, dt).trajectory(Matrix::Zero(d, d), times, &source);
}

Matrix first_order_state(const Liouvillian& l0, const FirstOrderGenerator& l1, const Matrix& pi0, double t,
                         double dt) {
  if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "first_order_state", "t must be >= 0");
  return first_order_trajectory(l0, l1, pi0, {t}, dt).back();
}

Matrix first_order_steady_state(const Liouvillian& l0, const FirstOrderGenerator& l1, const Matrix& pi0) {
  require_steady(l0, pi0, "first_order_steady_state");
  return solve_bordered(l0, -l1.apply(pi0), 0.0);
}

Liouvillian build_local_perturbed(const Matrix& h0, const Matrix& v, double delta, const std::vector<BathSpec>& baths,
                                  const BuildOptions& opts) {
  require_same_dim(h0, v, "build_local_perturbed");
  return build_liouvillian_split(h0 + delta * v, h0, baths, opts);
}

Liouvillian build_global_perturbed(const Matrix& h0, const Matrix& v, double delta,
                                   const std::vector<BathSpec>& baths, const BuildOptions& opts) {
  require_same_dim(h0, v, "build_global_perturbed");
  return build_liouvillian(h0 + delta * v, baths, opts);
}

Liouvillian build_perturbed(PerturbationMode mode, const Matrix& h0, const Matrix& v, double delta,
                            const std::vector<BathSpec>& baths, const BuildOptions& opts) {
  return mode == PerturbationMode::Local ? build_local_perturbed(h0, v, delta, baths, opts)
                                         : build_global_perturbed(h0, v, delta, baths, opts);
}

std::string_view regime_name(Regime r) {
  switch (r) {
    case Regime::Local:
      return "local";
    case Regime::Intermediate:
      return "intermediate";
    case Regime::Global:
      return "global";
  }
  return "unknown";
}

RegimeReport classify_regime(const PerturbationExpansion& exp, double delta, double gamma_scale,
                             const RegimeThresholds& thresholds) {
  const EigenSystem& eig = exp.basis;
  const Index d = eig.dim();
  struct Item {
    double gap;
    double shift;
  };
  std::vector<Item> items;
  items.reserve(static_cast<std::size_t>(d * (d + 1) / 2));
  for (Index m = 0; m < d; ++m)
    for (Index n = m; n < d; ++n) items.push_back({eig.values(n) - eig.values(m), exp.e1(n) - exp.e1(m)});
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.gap < b.gap; });
  const double tol = std::max(default_cluster_tol(eig), eig.degeneracy_tol);
  double nu = 0.0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= items.size(); ++i) {
    if (i == items.size() || (i > start && items[i].gap - items[i - 1].gap > tol)) {
      double lo = items[start].shift, hi = items[start].shift;
      for (std::size_t j = start; j < i; ++j) {
        lo = std::min(lo, items[j].shift);
        hi = std::max(hi, items[j].shift);
      }
      nu = std::max(nu, std::abs(delta) * (hi - lo));
      start = i;
    }
  }
  RegimeReport r;
  r.nu1 = nu;
  r.gamma_scale = gamma_scale;
  if (nu < thresholds.local_below * gamma_scale) {
    r.regime = Regime::Local;
  } else if (nu > thresholds.global_above * gamma_scale) {
    r.regime = Regime::Global;
  } else {
    r.regime = Regime::Intermediate;
  }
  return r;
}

}  // namespace respond
