#include "respond/lgks.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace respond {

RateProfile flat_rate(double gamma) {
  return [gamma](double) { return gamma; };
}

RateProfile banded_rate(double split, double gamma_low, double gamma_high) {
  return [=](double omega) { return omega < split ? gamma_low : gamma_high; };
}

double bose_occupation(double omega, double temperature) {
  if (!(omega > 0.0)) throw Error(ErrorCode::NonpositiveFrequency, "bose_occupation", "omega must be > 0");
  if (!(temperature >= 0.0)) throw Error(ErrorCode::InvalidArgument, "bose_occupation", "temperature must be >= 0");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(omega / temperature);
}

RatePair bath_rate(const BathSpec& bath, double omega, double frequency_tol) {
  const double w = std::abs(omega);
  if (!(w > frequency_tol)) {
    throw Error(ErrorCode::ZeroFrequencyChannel, "bath_rate", "no rate is defined for a zero-frequency channel");
  }
  if (!bath.rate_profile) throw Error(ErrorCode::InvalidArgument, "bath_rate", "bath has no rate profile");
  const double gamma = bath.rate_profile(w);
  if (!(gamma >= 0.0)) {
    throw Error(ErrorCode::NegativeRate, "bath_rate", "rate profile of bath '" + bath.label + "' is negative");
  }
  const double n = bose_occupation(w, bath.temperature);
  return RatePair{gamma * (n + 1.0), gamma * n};
}

Matrix BohrDecomposition::reconstruct() const {
  Matrix s = zero_channel;
  for (const auto& c : channels) s += c.jump + c.jump.adjoint();
  return s;
}

double default_cluster_tol(const EigenSystem& eig) {
  const double span = eig.values[eig.dim() - 1] - eig.values[0];
  return span > 0.0 ? 1e-6 * span : 1e-12;
}

std::vector<GapCluster> cluster_gaps(const EigenSystem& eig,
                                     const std::vector<std::pair<std::size_t, std::size_t>>& pairs, double tol) {
  struct Item {
    double gap;
    std::pair<std::size_t, std::size_t> pair;
  };
  std::vector<Item> items;
  items.reserve(pairs.size());
  for (const auto& p : pairs) items.push_back({eig.group_energy(p.second) - eig.group_energy(p.first), p});
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.gap < b.gap; });
  std::vector<GapCluster> out;
  double prev = 0.0;
  std::vector<double> sums;
  for (const auto& it : items) {
    if (out.empty() || it.gap - prev > tol) {
      out.emplace_back();
      sums.push_back(0.0);
    }
    out.back().pairs.push_back(it.pair);
    sums.back() += it.gap;
    prev = it.gap;
  }
  for (std::size_t c = 0; c < out.size(); ++c) out[c].omega = sums[c] / static_cast<double>(out[c].pairs.size());
  // a first cluster that starts near zero is the zero-frequency channel
  if (!out.empty() && std::abs(out.front().omega) <= tol) out.front().omega = 0.0;
  return out;
}

namespace {

Matrix block_of(const Matrix& a, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  Matrix b(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) b(static_cast<Index>(i), static_cast<Index>(j)) = a(rows[i], cols[j]);
  return b;
}

void add_block(Matrix& target, const Matrix& source, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  for (Index r : rows)
    for (Index c : cols) target(r, c) += source(r, c);
}

}  // namespace

BohrDecomposition bohr_decompose(const Matrix& s, const EigenSystem& eig, std::optional<double> freq_cluster_tol) {
  const char* op = "bohr_decompose";
  require_hermitian(s, op, 1e-10);
  if (s.rows() != eig.dim()) throw Error(ErrorCode::DimensionMismatch, op, "coupling and eigensystem dims differ");
  BohrDecomposition dec;
  dec.eig = eig;
  dec.freq_cluster_tol = freq_cluster_tol.value_or(default_cluster_tol(eig));
  const Matrix se = eig.to_eigenbasis(s);
  const double negligible = 1e-12 * std::max(max_abs(se), 1e-300);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const std::size_t ng = eig.groups.size();
  for (std::size_t a = 0; a < ng; ++a) {
    for (std::size_t b = a; b < ng; ++b) {
      if (max_abs(block_of(se, eig.groups[a], eig.groups[b])) > negligible) pairs.emplace_back(a, b);
    }
  }
  const auto clusters = cluster_gaps(eig, pairs, dec.freq_cluster_tol);
  const Index d = eig.dim();
  dec.zero_channel = Matrix::Zero(d, d);
  for (const auto& cl : clusters) {
    Matrix je = Matrix::Zero(d, d);
    for (const auto& [a, b] : cl.pairs) {
      add_block(je, se, eig.groups[a], eig.groups[b]);
      if (cl.omega == 0.0 && a != b) add_block(je, se, eig.groups[b], eig.groups[a]);
    }
    const Matrix jump = eig.from_eigenbasis(je);
    if (cl.omega == 0.0) {
      dec.zero_channel += jump;
    } else {
      dec.channels.push_back({cl.omega, jump});
    }
  }
  return dec;
}

namespace {

bool proportional_to_identity(const Matrix& a, double scale) {
  const Index d = a.rows();
  const Complex mean = a.trace() / static_cast<double>(d);
  return max_abs(a - mean * identity(d)) <= 1e-12 * std::max(scale, 1e-300);
}

}  // namespace

Dissipator build_dissipator(const BathSpec& bath, const BohrDecomposition& dec, ZeroFrequencyPolicy policy) {
  Dissipator out;
  out.label = bath.label;
  out.temperature = bath.temperature;
  out.dim = bath.coupling.rows();
  const double scale = max_abs(bath.coupling);
  if (max_abs(dec.zero_channel) > 1e-12 * scale && !proportional_to_identity(dec.zero_channel, scale)) {
    if (policy == ZeroFrequencyPolicy::Reject) {
      throw Error(ErrorCode::ZeroFrequencyChannel, "build_dissipator",
                  "coupling of bath '" + bath.label + "' has a zero-frequency component not proportional to identity");
    }
  }
  for (const auto& c : dec.channels) {
    const RatePair r = bath_rate(bath, c.omega);
    out.channels.push_back({c.omega, r.down, r.up, c.jump});
  }
  return out;
}

Superoperator Dissipator::superoperator() const {
  Index n = dim;
  if (n == 0 && !channels.empty()) n = channels.front().jump.rows();
  Superoperator total = Superoperator::zero(n);
  for (const auto& c : channels) {
    if (c.rate_down != 0.0) total += Superoperator::lindblad(c.rate_down, c.jump);
    if (c.rate_up != 0.0) total += Superoperator::lindblad(c.rate_up, c.jump.adjoint());
  }
  return total;
}

Liouvillian::Liouvillian(Matrix hamiltonian, std::vector<Dissipator> dissipators, LiouvillianMode mode)
    : hamiltonian_(std::move(hamiltonian)), dissipators_(std::move(dissipators)), mode_(mode) {
  require_hermitian(hamiltonian_, "Liouvillian", 1e-10);
  std::set<std::string> labels;
  full_ = Superoperator::hamiltonian(hamiltonian_);
  for (const auto& d : dissipators_) {
    if (!labels.insert(d.label).second) {
      throw Error(ErrorCode::InvalidArgument, "Liouvillian", "duplicate bath label '" + d.label + "'");
    }
    for (const auto& c : d.channels) {
      require_same_dim(hamiltonian_, c.jump, "Liouvillian");
      if (c.rate_down < 0.0 || c.rate_up < 0.0) throw Error(ErrorCode::NegativeRate, "Liouvillian", "negative rate");
    }
    full_ += d.superoperator();
  }
  vectorized_ = std::make_shared<const SparseMatrix>(full_.vectorized());
  norm_estimate_ = full_.norm_estimate();
}

const Dissipator& Liouvillian::dissipator(std::string_view label) const {
  for (const auto& d : dissipators_)
    if (d.label == label) return d;
  throw Error(ErrorCode::UnknownBath, "Liouvillian", "no bath labelled '" + std::string(label) + "'");
}

std::vector<std::string> Liouvillian::bath_labels() const {
  std::vector<std::string> out;
  for (const auto& d : dissipators_) out.push_back(d.label);
  return out;
}

Superoperator Liouvillian::bath_superoperator(std::string_view label) const {
  Superoperator s = dissipator(label).superoperator();
  if (s.dim() == 0) s = Superoperator::zero(dim());
  return s;
}

Liouvillian Liouvillian::partial(std::string_view label) const {
  return Liouvillian(hamiltonian_, {dissipator(label)}, mode_);
}

Matrix Liouvillian::apply(const Matrix& rho) const {
  require_same_dim(hamiltonian_, rho, "Liouvillian::apply");
  if (mode_ == LiouvillianMode::MatrixFree) return full_.apply(rho);
  const Vector out = (*vectorized_) * vec(rho);
  return unvec(out, dim());
}

Matrix Liouvillian::apply_adjoint(const Matrix& x) const {
  require_same_dim(hamiltonian_, x, "Liouvillian::apply_adjoint");
  if (mode_ == LiouvillianMode::MatrixFree) return full_.apply_adjoint(x);
  // Tr((L rho) X) = vec(X^T)^T M vec(rho)
  const Vector out = vectorized_->transpose() * vec(x.transpose());
  return unvec(out, dim()).transpose();
}

Liouvillian build_liouvillian_split(const Matrix& h_commutator, const Matrix& h_dissipator,
                                    const std::vector<BathSpec>& baths, const BuildOptions& opts) {
  const char* op = "build_liouvillian";
  require_hermitian(h_commutator, op, 1e-10);
  require_same_dim(h_commutator, h_dissipator, op);
  std::vector<Dissipator> dissipators;
  if (!baths.empty()) {
    const EigenSystem eig = eigendecompose_hermitian(h_dissipator, opts.degeneracy_tol);
    for (const auto& bath : baths) {
      require_same_dim(h_commutator, bath.coupling, op);
      const BohrDecomposition dec = bohr_decompose(bath.coupling, eig, opts.freq_cluster_tol);
      dissipators.push_back(build_dissipator(bath, dec, opts.zero_frequency));
    }
  }
  return Liouvillian(h_commutator, std::move(dissipators));
}

Liouvillian build_liouvillian(const Matrix& h, const std::vector<BathSpec>& baths, const BuildOptions& opts) {
  return build_liouvillian_split(h, h, baths, opts);
}

Matrix apply_adjoint(const Liouvillian& l, const Matrix& a) { return l.apply_adjoint(a); }

}  // namespace respond
