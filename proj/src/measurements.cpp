#include "cosetlab/measurements.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cosetlab/errors.hpp"
#include "cosetlab/random.hpp"
#include "family_paths.hpp"

namespace cosetlab {

// ---------------------------------------------------------------------------
// Family representations

namespace detail {

std::size_t power_dim(std::size_t base, int k) {
  std::size_t d = 1;
  for (int i = 0; i < k; ++i) {
    if (base != 0 && d > std::numeric_limits<std::size_t>::max() / base) return std::numeric_limits<std::size_t>::max();
    d *= base;
  }
  return d;
}

std::vector<double> copy_eigenvalues(const CandidateFamily& family, int k) {
  std::vector<double> c;
  const double g = static_cast<double>(family.group()->order());
  for (const auto& h : family.subgroups()) c.push_back(std::pow(static_cast<double>(h.order()) / g, k));
  return c;
}

std::size_t stacked_rank(const CandidateFamily& family, int k) {
  std::size_t total = 0;
  for (const auto& h : family.subgroups()) {
    const std::size_t r = power_dim(family.group()->order() / h.order(), k);
    if (r == std::numeric_limits<std::size_t>::max() || total > std::numeric_limits<std::size_t>::max() - r)
      return std::numeric_limits<std::size_t>::max();
    total += r;
  }
  return total;
}

std::vector<Matrix> dense_member_bases(const CandidateFamily& family, int k, const Limits& limits) {
  std::vector<Matrix> out;
  for (const auto& h : family.subgroups()) out.push_back(tensor_power(coset_basis(*family.group(), h), k, limits));
  return out;
}

PureStateFamily stacked_family(const CandidateFamily& family, int k, const std::vector<double>& scale) {
  std::vector<std::pair<double, PureStateFamily>> parts;
  const auto c = copy_eigenvalues(family, k);
  for (std::size_t i = 0; i < family.size(); ++i) {
    const PureStateFamily one = pure_decomposition(family.group(), family[i]);
    PureStateFamily fam = one;
    for (int f = 1; f < k; ++f) fam = tensor(fam, one);
    // Component weights of fam are c_i; rescale them to scale[i].
    parts.emplace_back(scale[i] / c[i], std::move(fam));
  }
  return mix(parts);
}

std::vector<std::size_t> stacked_offsets(const CandidateFamily& family, int k) {
  std::vector<std::size_t> off{0};
  for (const auto& h : family.subgroups()) off.push_back(off.back() + power_dim(family.group()->order() / h.order(), k));
  return off;
}

BlockedFamily blocked_family(const CandidateFamily& family, int k, const Limits& limits) {
  BlockedFamily out{SymmetryReduction(family.group()), {}};
  for (const auto& h : family.subgroups()) {
    const Matrix v = coset_basis(*family.group(), h);
    const Matrix p = v * v.adjoint();
    ProductTerm term{1.0, std::vector<const Matrix*>(static_cast<std::size_t>(k), &p)};
    out.members.push_back(block_reduce(out.reduction, {term}, k, 0.0, limits));
  }
  return out;
}

}  // namespace detail

using namespace detail;

// ---------------------------------------------------------------------------
// POVM

POVM::POVM(std::vector<std::string> labels, std::vector<HermitianOperator> elements, double tol)
    : POVM(std::move(labels), std::move(elements), tol, true) {}

POVM POVM::trusted(std::vector<std::string> labels, std::vector<HermitianOperator> elements, double tol) {
  return POVM(std::move(labels), std::move(elements), tol, false);
}

POVM::POVM(std::vector<std::string> labels, std::vector<HermitianOperator> elements, double tol, bool check_psd)
    : labels_(std::move(labels)), elements_(std::move(elements)) {
  if (elements_.empty()) throw UsageError("POVM needs at least one element");
  if (labels_.size() != elements_.size()) throw UsageError("POVM needs one label per element");
  for (std::size_t i = 0; i < labels_.size(); ++i)
    for (std::size_t j = i + 1; j < labels_.size(); ++j)
      if (labels_[i] == labels_[j]) throw UsageError("duplicate POVM label '" + labels_[i] + "'");
  for (const auto& e : elements_)
    if (e.dim() != elements_.front().dim()) throw UsageError("POVM elements differ in dimension");
  const double defect = completeness_defect();
  if (defect > tol) throw DomainError("POVM elements do not sum to I (defect " + std::to_string(defect) + ")");
  if (check_psd) {
    for (std::size_t i = 0; i < elements_.size(); ++i) {
      const PsdWitness w = psd_check(elements_[i], tol);
      if (!w.psd)
        throw DomainError("POVM element '" + labels_[i] + "' is not PSD (min eigenvalue " +
                          std::to_string(w.min_eigenvalue) + ")");
    }
  }
}

std::optional<std::size_t> POVM::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  return std::nullopt;
}

const HermitianOperator& POVM::element(const std::string& label) const {
  const auto i = index_of(label);
  if (!i) throw UsageError("POVM has no outcome '" + label + "'");
  return elements_[*i];
}

double POVM::completeness_defect() const {
  Matrix sum = -Matrix::Identity(static_cast<Eigen::Index>(dim()), static_cast<Eigen::Index>(dim()));
  for (const auto& e : elements_) sum += e.matrix();
  return sum.cwiseAbs().maxCoeff();
}

double POVM::min_eigenvalue() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : elements_) m = std::min(m, psd_check(e).min_eigenvalue);
  return m;
}

double OutcomeDistribution::probability(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return probabilities[i];
  throw UsageError("distribution has no outcome '" + label + "'");
}

OutcomeDistribution measure(const POVM& povm, const HermitianOperator& state) {
  if (povm.dim() != state.dim()) throw UsageError("measure: POVM and state dimensions differ");
  OutcomeDistribution d;
  d.labels = povm.labels();
  double total = 0.0;
  for (std::size_t i = 0; i < povm.size(); ++i) {
    double p = trace_product(povm.element(i).matrix(), state.matrix()).real();
    if (p < -1e-10) throw NumericError("negative outcome probability " + std::to_string(p) + " for '" + povm.label(i) + "'");
    p = std::max(p, 0.0);
    d.probabilities.push_back(p);
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw NumericError("outcome probabilities sum to " + std::to_string(total));
  return d;
}

OutcomeDistribution measure(const POVM& povm, const DensityOperator& state) { return measure(povm, state.op()); }

std::size_t sample_index(const OutcomeDistribution& dist, std::uint64_t seed) {
  Rng rng(seed);
  const double u = unit_uniform(rng);
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < dist.probabilities.size(); ++i) {
    if (dist.probabilities[i] <= 0.0) continue;
    cum += dist.probabilities[i];
    last_positive = i;
    if (u < cum) return i;
  }
  return last_positive;
}

std::string sample_outcome(const POVM& povm, const DensityOperator& state, std::uint64_t seed) {
  const OutcomeDistribution d = measure(povm, state);
  return d.labels[sample_index(d, seed)];
}

std::string to_string(ComputePath p) {
  switch (p) {
    case ComputePath::automatic: return "automatic";
    case ComputePath::dense: return "dense";
    case ComputePath::gram: return "gram";
    case ComputePath::block: return "block";
  }
  return "?";
}

ComputePath parse_compute_path(const std::string& text) {
  if (text == "automatic" || text == "auto") return ComputePath::automatic;
  if (text == "dense") return ComputePath::dense;
  if (text == "gram") return ComputePath::gram;
  if (text == "block") return ComputePath::block;
  throw UsageError("unknown compute path '" + text + "'");
}

std::optional<ComputePath> choose_path(const CandidateFamily& family, int k, std::size_t gram_components,
                                       const Limits& limits) {
  if (power_dim(family.group()->order(), k) <= limits.dense_cap) return ComputePath::dense;
  const SymmetryReduction red(family.group());
  if (block_path_fits(red, k, limits)) return ComputePath::block;
  if (gram_components <= limits.gram_cap) return ComputePath::gram;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Pretty good measurement

namespace {

void require_k(int k) {
  if (k < 1) throw UsageError("number of copies k must be positive");
}

std::vector<double> pgm_weights(const CandidateFamily& family, int k, PgmWeighting weighting) {
  if (weighting == PgmWeighting::projective) return std::vector<double>(family.size(), 1.0);
  return copy_eigenvalues(family, k);
}

// Eigenvectors and eigenvalues of Sigma = sum_i w_i V_i V_i^dagger restricted
// to its support.
struct DenseSigma {
  Matrix support;
  RealVector values;
};

DenseSigma dense_sigma(const std::vector<Matrix>& bases, const std::vector<double>& w, double tol) {
  const Eigen::Index dim = bases.front().rows();
  Matrix sigma = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < bases.size(); ++i) sigma.noalias() += w[i] * bases[i] * bases[i].adjoint();
  const Eigensystem es = eigh(HermitianOperator::hermitian_part(sigma).matrix(), true);
  const double top = es.values.maxCoeff();
  if (es.values.minCoeff() < -tol * top) throw NumericError("Sigma is not PSD");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    if (es.values(i) > tol * top) keep.push_back(i);
  DenseSigma out{Matrix(dim, static_cast<Eigen::Index>(keep.size())), RealVector(static_cast<Eigen::Index>(keep.size()))};
  for (std::size_t c = 0; c < keep.size(); ++c) {
    out.support.col(static_cast<Eigen::Index>(c)) = es.vectors.col(keep[c]);
    out.values(static_cast<Eigen::Index>(c)) = es.values(keep[c]);
  }
  return out;
}

}  // namespace

POVM pgm(const CandidateFamily& family, int k, PgmWeighting weighting, const Limits& limits) {
  require_k(k);
  const auto bases = dense_member_bases(family, k, limits);
  const auto w = pgm_weights(family, k, weighting);
  const DenseSigma s = dense_sigma(bases, w, limits.rank_tol);
  const RealVector inv_sqrt = s.values.array().rsqrt();
  std::vector<std::string> labels;
  std::vector<HermitianOperator> elements;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    const Matrix wv = s.support * (inv_sqrt.asDiagonal() * (s.support.adjoint() * bases[i]));
    labels.push_back(family.label(i));
    elements.push_back(HermitianOperator::hermitian_part(w[i] * wv * wv.adjoint()));
  }
  const Eigen::Index dim = bases.front().rows();
  labels.push_back("fail");
  elements.push_back(HermitianOperator::hermitian_part(Matrix::Identity(dim, dim) - s.support * s.support.adjoint()));
  return POVM::trusted(std::move(labels), std::move(elements));
}

POVM pgm_projective(const CandidateFamily& family, int k, const Limits& limits) {
  return pgm(family, k, PgmWeighting::projective, limits);
}

POVM pgm_states(const CandidateFamily& family, int k, const Limits& limits) {
  return pgm(family, k, PgmWeighting::states, limits);
}

std::vector<double> member_success(const POVM& povm, const CandidateFamily& family, int k, const Limits& limits) {
  require_k(k);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto j = povm.index_of(family.label(i));
    if (!j) throw UsageError("POVM has no outcome for family member " + family.label(i));
    idx.push_back(*j);
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const DensityOperator rho = family_state(family, i, k, limits);
    if (rho.dim() != povm.dim()) throw UsageError("POVM dimension does not match |G|^k");
    out.push_back(measure(povm, rho).probabilities[idx[i]]);
  }
  return out;
}

double average_success(const POVM& povm, const CandidateFamily& family, int k, const Limits& limits) {
  const auto s = member_success(povm, family, k, limits);
  double total = 0.0;
  for (double v : s) total += v;
  return total / static_cast<double>(s.size());
}

namespace {

PgmStatistics pgm_dense(const CandidateFamily& family, int k, const std::vector<double>& w, const Limits& limits) {
  const auto bases = dense_member_bases(family, k, limits);
  const auto c = copy_eigenvalues(family, k);
  const DenseSigma s = dense_sigma(bases, w, limits.rank_tol);
  const RealVector inv_sqrt = s.values.array().rsqrt();
  PgmStatistics out;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    const Matrix a = s.support.adjoint() * bases[i];
    const Matrix b = a.adjoint() * inv_sqrt.asDiagonal() * a;  // V_i^dagger W V_i
    out.member_success.push_back(w[i] * c[i] * b.squaredNorm());
  }
  out.path = ComputePath::dense;
  return out;
}

PgmStatistics pgm_gram(const CandidateFamily& family, int k, const std::vector<double>& w, const Limits& limits) {
  const PureStateFamily fam = stacked_family(family, k, w);
  if (fam.size() > limits.gram_cap) throw CapacityError("Gram matrix exceeds the Gram cap", fam.size(), limits.gram_cap);
  const auto off = stacked_offsets(family, k);
  const auto c = copy_eigenvalues(family, k);
  const Eigensystem es = eigh(weighted_gram(fam), true);
  const double top = es.values.maxCoeff();
  if (es.values.minCoeff() < -limits.rank_tol * top) throw NumericError("Gram matrix is not PSD");
  RealVector root = es.values;
  for (Eigen::Index i = 0; i < root.size(); ++i) root(i) = root(i) > limits.rank_tol * top ? std::sqrt(root(i)) : 0.0;
  PgmStatistics out;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto lo = static_cast<Eigen::Index>(off[i]);
    const auto len = static_cast<Eigen::Index>(off[i + 1] - off[i]);
    const Matrix rows = es.vectors.middleRows(lo, len);
    const Matrix block = rows * root.asDiagonal() * rows.adjoint();  // (G^1/2)_{ii}
    out.member_success.push_back(c[i] / w[i] * block.squaredNorm());
  }
  out.path = ComputePath::gram;
  return out;
}

// Global support cut over every block, consistent with the dense path.
double global_cut(const std::vector<Eigensystem>& es, double tol) {
  double top = 0.0;
  for (const auto& e : es)
    if (e.values.size()) top = std::max(top, e.values.maxCoeff());
  return tol * top;
}

std::vector<Eigensystem> block_sigma(const BlockedFamily& bf, const std::vector<double>& w) {
  std::vector<Eigensystem> out;
  const std::size_t nb = bf.members.front().num_blocks();
  for (std::size_t b = 0; b < nb; ++b) {
    Matrix sigma = w[0] * bf.members[0].blocks()[b];
    for (std::size_t i = 1; i < bf.members.size(); ++i) sigma += w[i] * bf.members[i].blocks()[b];
    out.push_back(eigh(HermitianOperator::hermitian_part(sigma).matrix(), true));
  }
  return out;
}

PgmStatistics pgm_block(const CandidateFamily& family, int k, const std::vector<double>& w, const Limits& limits) {
  const BlockedFamily bf = blocked_family(family, k, limits);
  const auto c = copy_eigenvalues(family, k);
  const auto es = block_sigma(bf, w);
  const double cut = global_cut(es, limits.rank_tol);
  PgmStatistics out;
  out.member_success.assign(family.size(), 0.0);
  for (std::size_t b = 0; b < es.size(); ++b) {
    const auto& e = es[b];
    RealVector inv(e.values.size());
    for (Eigen::Index j = 0; j < inv.size(); ++j) inv(j) = e.values(j) > cut ? 1.0 / std::sqrt(e.values(j)) : 0.0;
    const Matrix wb = e.vectors * inv.asDiagonal() * e.vectors.adjoint();
    for (std::size_t i = 0; i < family.size(); ++i) {
      const Matrix x = wb * bf.members[i].blocks()[b];
      out.member_success[i] += w[i] * c[i] * trace_product(x, x).real();
    }
  }
  out.path = ComputePath::block;
  return out;
}

}  // namespace

PgmStatistics pgm_statistics(const CandidateFamily& family, int k, PgmWeighting weighting, ComputePath path,
                             const Limits& limits) {
  require_k(k);
  const auto w = pgm_weights(family, k, weighting);
  if (path == ComputePath::automatic) {
    const auto chosen = choose_path(family, k, stacked_rank(family, k), limits);
    if (!chosen)
      throw CapacityError("no PGM path fits the limits", stacked_rank(family, k), limits.gram_cap);
    path = *chosen;
  }
  PgmStatistics out;
  switch (path) {
    case ComputePath::dense: out = pgm_dense(family, k, w, limits); break;
    case ComputePath::gram: out = pgm_gram(family, k, w, limits); break;
    case ComputePath::block: out = pgm_block(family, k, w, limits); break;
    case ComputePath::automatic: break;
  }
  double total = 0.0;
  for (double v : out.member_success) total += v;
  out.average_success = total / static_cast<double>(family.size());
  return out;
}

// ---------------------------------------------------------------------------
// Support-union projector test

POVM tcs_projector_povm(const CandidateFamily& family, int k, const Limits& limits) {
  require_k(k);
  const auto bases = dense_member_bases(family, k, limits);
  const DenseSigma s = dense_sigma(bases, std::vector<double>(bases.size(), 1.0), limits.rank_tol);
  const Eigen::Index dim = bases.front().rows();
  const Matrix t = s.support * s.support.adjoint();
  return POVM::trusted({"nontrivial", "trivial"},
                       {HermitianOperator::hermitian_part(t),
                        HermitianOperator::hermitian_part(Matrix::Identity(dim, dim) - t)});
}

TcsStatistics tcs_statistics(const CandidateFamily& family, int k, ComputePath path, const Limits& limits) {
  require_k(k);
  const auto c = copy_eigenvalues(family, k);
  const std::vector<double> ones(family.size(), 1.0);
  if (path == ComputePath::automatic) {
    const auto chosen = choose_path(family, k, stacked_rank(family, k), limits);
    if (!chosen) throw CapacityError("no TCS path fits the limits", stacked_rank(family, k), limits.gram_cap);
    path = *chosen;
  }
  TcsStatistics out;
  out.path = path;
  const std::size_t dim = power_dim(family.group()->order(), k);
  switch (path) {
    case ComputePath::dense: {
      const auto bases = dense_member_bases(family, k, limits);
      const DenseSigma s = dense_sigma(bases, ones, limits.rank_tol);
      out.rank = static_cast<std::size_t>(s.support.cols());
      for (std::size_t i = 0; i < bases.size(); ++i)
        out.member_acceptance.push_back(c[i] * (s.support.adjoint() * bases[i]).squaredNorm());
      break;
    }
    case ComputePath::gram: {
      const PureStateFamily fam = stacked_family(family, k, ones);
      if (fam.size() > limits.gram_cap) throw CapacityError("Gram matrix exceeds the Gram cap", fam.size(), limits.gram_cap);
      const auto off = stacked_offsets(family, k);
      const Eigensystem es = eigh(weighted_gram(fam), true);
      const double cut = limits.rank_tol * es.values.maxCoeff();
      // With G = Y^dagger Y, the projector onto span(Y) is Y G^+ Y^dagger and
      // V_i^dagger T V_i is the (i, i) block of G G^+ G.
      RealVector kept = es.values;
      for (Eigen::Index j = 0; j < kept.size(); ++j) {
        if (es.values(j) > cut) {
          ++out.rank;
        } else {
          kept(j) = 0.0;
        }
      }
      for (std::size_t i = 0; i < family.size(); ++i) {
        const auto lo = static_cast<Eigen::Index>(off[i]);
        const auto len = static_cast<Eigen::Index>(off[i + 1] - off[i]);
        const Matrix rows = es.vectors.middleRows(lo, len);
        out.member_acceptance.push_back(c[i] * (rows * kept.asDiagonal() * rows.adjoint()).trace().real());
      }
      break;
    }
    case ComputePath::block: {
      const BlockedFamily bf = blocked_family(family, k, limits);
      const auto es = block_sigma(bf, ones);
      const double cut = global_cut(es, limits.rank_tol);
      out.member_acceptance.assign(family.size(), 0.0);
      for (std::size_t b = 0; b < es.size(); ++b) {
        std::vector<Eigen::Index> keep;
        for (Eigen::Index j = 0; j < es[b].values.size(); ++j)
          if (es[b].values(j) > cut) keep.push_back(j);
        out.rank += keep.size();
        Matrix basis(es[b].vectors.rows(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t j = 0; j < keep.size(); ++j) basis.col(static_cast<Eigen::Index>(j)) = es[b].vectors.col(keep[j]);
        for (std::size_t i = 0; i < family.size(); ++i)
          out.member_acceptance[i] +=
              c[i] * (basis.adjoint() * bf.members[i].blocks()[b] * basis).trace().real();
      }
      break;
    }
    case ComputePath::automatic: break;
  }
  out.false_positive = static_cast<double>(out.rank) / static_cast<double>(dim);
  return out;
}

// ---------------------------------------------------------------------------
// Helstrom measurement

HelstromResult helstrom(const HermitianOperator& a, const HermitianOperator& b, const std::string& label_a,
                        const std::string& label_b) {
  if (a.dim() != b.dim()) throw UsageError("helstrom: state dimensions differ");
  const Eigensystem es = eigh((a - b).matrix(), true);
  const double scale = es.values.size() ? std::max(1.0, es.values.cwiseAbs().maxCoeff()) : 1.0;
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    if (es.values(i) > 1e-12 * scale) keep.push_back(i);
  Matrix basis(static_cast<Eigen::Index>(a.dim()), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) basis.col(static_cast<Eigen::Index>(j)) = es.vectors.col(keep[j]);
  const Matrix plus = basis * basis.adjoint();
  const auto d = static_cast<Eigen::Index>(a.dim());
  POVM povm = POVM::trusted({label_a, label_b}, {HermitianOperator::hermitian_part(plus),
                                                 HermitianOperator::hermitian_part(Matrix::Identity(d, d) - plus)});
  const double norm = es.values.cwiseAbs().sum();
  const double measured = 0.5 * (trace_product(povm.element(0).matrix(), a.matrix()).real() +
                                 trace_product(povm.element(1).matrix(), b.matrix()).real());
  return {std::move(povm), 0.5 + 0.25 * norm, measured};
}

HelstromResult helstrom(const DensityOperator& a, const DensityOperator& b, const std::string& label_a,
                        const std::string& label_b) {
  if (!(a.basis() == b.basis())) throw UsageError("helstrom: states live in different bases");
  return helstrom(a.op(), b.op(), label_a, label_b);
}

}  // namespace cosetlab
