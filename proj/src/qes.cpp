#include "cosetlab/qes.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cosetlab/errors.hpp"
#include "cosetlab/random.hpp"
#include "cosetlab/symmetry.hpp"
#include "family_paths.hpp"

namespace cosetlab {

void QesParams::validate() const {
  if (n < 2) throw UsageError("QES needs n >= 2");
  if (m < 2 || m > n) throw UsageError("QES needs 2 <= m <= n");
  if (n % m != 0) throw UsageError("QES needs m to divide n");
}

QesScheme::QesScheme(QesParams params, const Limits& limits) : params_(params), limits_(limits) {
  params_.validate();
  keys_ = key_set(params_.n, params_.m, limits_);
  group_ = make_group(GroupRecipe::symmetric(params_.n), limits_);
}

Permutation QesScheme::keygen(std::uint64_t seed) const {
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, keys_.size() - 1);
  return keys_[pick(rng)];
}

std::vector<DensityOperator> QesScheme::encryption_key_state(const Permutation& h) const {
  std::vector<DensityOperator> out;
  for (int s = 0; s < params_.m; ++s) out.push_back(phase_coset_state(group_, params_.m, h, s, limits_));
  return out;
}

DensityOperator QesScheme::encrypt(const Permutation& h, int s) const {
  if (s < 0 || s >= params_.m) throw UsageError("message must lie in [0, m)");
  return phase_coset_state(group_, params_.m, h, s, limits_);
}

POVM QesScheme::decryption_povm(const Permutation& h) const {
  const auto dim = static_cast<Eigen::Index>(group_->order());
  std::vector<std::string> labels;
  std::vector<HermitianOperator> elements;
  Matrix residual = Matrix::Identity(dim, dim);
  for (int s = 0; s < params_.m; ++s) {
    const Projector p = Projector::from_basis(phase_coset_basis(group_, params_.m, h, s));
    residual -= p.op().matrix();
    labels.push_back(std::to_string(s));
    elements.push_back(p.op());
  }
  labels.push_back("residual");
  elements.push_back(HermitianOperator::hermitian_part(residual));
  return POVM::trusted(std::move(labels), std::move(elements));
}

QesScheme::Decryption QesScheme::decrypt(const Permutation& h, const DensityOperator& cipher) const {
  if (cipher.dim() != group_->order()) throw UsageError("cipherstate dimension must be n!");
  const POVM povm = decryption_povm(h);
  Decryption d{0, measure(povm, cipher)};
  const double residual = d.distribution.probabilities.back();
  if (residual > 1e-6) throw DomainError("decryption failed: residual outcome probability " + std::to_string(residual));
  for (int s = 1; s < params_.m; ++s)
    if (d.distribution.probabilities[static_cast<std::size_t>(s)] > d.distribution.probabilities[static_cast<std::size_t>(d.message)])
      d.message = s;
  return d;
}

QesBound qes_bound(const QesParams& params, int k) {
  params.validate();
  if (k < 0) throw UsageError("k must be nonnegative");
  QesBound b;
  b.key_count = key_count(params.n, params.m);
  const double m = params.m;
  const double e = params.n - params.n / params.m;
  b.bound = std::sqrt(std::pow(m, params.m * k + 1) / static_cast<double>(b.key_count));
  b.stirling_keys = std::sqrt(m) * std::pow(static_cast<double>(params.n), e) / std::exp(e);
  b.vacuous = b.bound > 2.0;
  return b;
}

bool SecurityReport::has_violation() const {
  return std::any_of(flags.begin(), flags.end(), [](const std::string& f) { return f.rfind("violation:", 0) == 0; });
}

namespace {

// Dense phase coset matrices indexed [key][s].
std::vector<std::vector<Matrix>> phase_matrices(const QesScheme& scheme) {
  std::vector<std::vector<Matrix>> out;
  for (const auto& h : scheme.keys()) {
    std::vector<Matrix> row;
    for (int s = 0; s < scheme.params().m; ++s)
      row.push_back(phase_coset_state(scheme.group(), scheme.params().m, h, s, scheme.limits()).matrix());
    out.push_back(std::move(row));
  }
  return out;
}

// Factor list rho^(s), then sigma_h repeated k times.
std::vector<const Matrix*> view_factors(const std::vector<Matrix>& row, int s, int k) {
  std::vector<const Matrix*> f{&row[static_cast<std::size_t>(s)]};
  for (int c = 0; c < k; ++c)
    for (const auto& r : row) f.push_back(&r);
  return f;
}

Matrix dense_product(const std::vector<const Matrix*>& factors) {
  Matrix out = *factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, *factors[i]);
  return out;
}

// (1/|K|) sum_h [rho_h^(s) - rho_h^(s')] (x) sigma_h^k, or with s' < 0 the
// view minus `shift` times the identity.
double view_norm_dense(const std::vector<std::vector<Matrix>>& mats, int s, int s2, int k, double shift,
                       std::size_t dim) {
  const double w = 1.0 / static_cast<double>(mats.size());
  Matrix x = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (const auto& row : mats) {
    x += w * dense_product(view_factors(row, s, k));
    if (s2 >= 0) x -= w * dense_product(view_factors(row, s2, k));
  }
  x.diagonal().array() -= shift;
  return trace_norm(HermitianOperator::hermitian_part(x));
}

double view_norm_block(const QesScheme& scheme, const std::vector<std::vector<Matrix>>& mats, int s, int s2, int k,
                       double shift) {
  const SymmetryReduction red(scheme.group());
  const double w = 1.0 / static_cast<double>(mats.size());
  std::vector<ProductTerm> terms;
  for (const auto& row : mats) {
    terms.push_back({w, view_factors(row, s, k)});
    if (s2 >= 0) terms.push_back({-w, view_factors(row, s2, k)});
  }
  const int factors = scheme.params().m * k + 1;
  return trace_norm(block_reduce(red, terms, factors, shift, scheme.limits()));
}

PureStateFamily view_family(const QesScheme& scheme, int s, int k) {
  const int m = scheme.params().m;
  std::vector<std::pair<double, PureStateFamily>> parts;
  for (const auto& h : scheme.keys()) {
    PureStateFamily fam = pure_decomposition(scheme.group(), m, h, s);
    for (int c = 0; c < k; ++c)
      for (int t = 0; t < m; ++t) fam = tensor(fam, pure_decomposition(scheme.group(), m, h, t));
    parts.emplace_back(1.0 / static_cast<double>(scheme.keys().size()), std::move(fam));
  }
  return mix(parts);
}

}  // namespace

SecurityReport indistinguishability_norms(const QesScheme& scheme, int k, const SecurityOptions& options) {
  if (k < 0) throw UsageError("k must be nonnegative");
  const Limits& limits = scheme.limits();
  const QesParams& p = scheme.params();
  const int factors = p.m * k + 1;
  const std::size_t nfact = scheme.group()->order();
  const std::size_t dim = detail::power_dim(nfact, factors);
  const double shift = std::pow(1.0 / static_cast<double>(nfact), factors);

  SecurityReport r;
  r.params = p;
  r.k = k;
  r.bound = qes_bound(p, k);

  // Pure components per l_s mixture: |K| (n!/m)^(mk+1).
  const std::size_t per_key = detail::power_dim(nfact / static_cast<std::size_t>(p.m), factors);
  r.components = per_key > limits.component_cap ? limits.component_cap + 1 : per_key * scheme.keys().size();

  const SymmetryReduction red(scheme.group());
  const bool dense_fits = dim <= limits.dense_cap;
  const bool gram_fits = r.components <= limits.gram_cap;
  const bool block_fits = block_path_fits(red, factors, limits);

  ComputePath lpath = options.path;
  if (lpath == ComputePath::automatic) {
    if (dense_fits) lpath = ComputePath::dense;
    else if (block_fits) lpath = ComputePath::block;
    else if (gram_fits) lpath = ComputePath::gram;
    else throw CapacityError("no path fits the l_s computation (pure components)", r.components, limits.gram_cap);
  }
  if (lpath == ComputePath::gram && r.components > limits.component_cap)
    throw CapacityError("pure-component count exceeds the component cap", r.components, limits.component_cap);

  ComputePath ppath = options.pairwise_path;
  if (ppath == ComputePath::automatic) {
    if (dense_fits) ppath = ComputePath::dense;
    else if (block_fits) ppath = ComputePath::block;
    else throw CapacityError("no path fits the pairwise computation (dimension)", dim, limits.dense_cap);
  }
  if (ppath == ComputePath::gram) throw UsageError("pairwise norms have no Gram path (the operator is not PSD)");

  const auto mats = phase_matrices(scheme);
  for (int s = 0; s < p.m; ++s) {
    double v = 0.0;
    switch (lpath) {
      case ComputePath::dense: v = view_norm_dense(mats, s, -1, k, shift, dim); break;
      case ComputePath::gram: v = shifted_trace_norm(view_family(scheme, s, k), shift, dim, limits); break;
      case ComputePath::block: v = view_norm_block(scheme, mats, s, -1, k, shift); break;
      case ComputePath::automatic: break;
    }
    r.l.push_back(v);
  }
  r.l_path = to_string(lpath);

  r.pairwise.assign(static_cast<std::size_t>(p.m), std::vector<double>(static_cast<std::size_t>(p.m), 0.0));
  for (int s = 0; s < p.m; ++s) {
    for (int t = s + 1; t < p.m; ++t) {
      const double v = ppath == ComputePath::dense ? view_norm_dense(mats, s, t, k, 0.0, dim)
                                                   : view_norm_block(scheme, mats, s, t, k, 0.0);
      r.pairwise[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] = v;
      r.pairwise[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)] = v;
    }
  }
  r.pairwise_path = to_string(ppath);

  if (options.cross_check) {
    if (lpath != ComputePath::dense && dense_fits) {
      r.l0_cross_check = view_norm_dense(mats, 0, -1, k, shift, dim);
      r.cross_check_path = to_string(ComputePath::dense);
    } else if (lpath != ComputePath::gram && gram_fits) {
      r.l0_cross_check = shifted_trace_norm(view_family(scheme, 0, k), shift, dim, limits);
      r.cross_check_path = to_string(ComputePath::gram);
    } else if (lpath != ComputePath::block && block_fits) {
      r.l0_cross_check = view_norm_block(scheme, mats, 0, -1, k, shift);
      r.cross_check_path = to_string(ComputePath::block);
    }
    if (r.l0_cross_check && std::abs(*r.l0_cross_check - r.l.front()) > options.slack)
      r.flags.push_back("violation:path_disagreement");
  }

  for (double v : r.l) r.symmetry_defect = std::max(r.symmetry_defect, std::abs(v - r.l.front()));
  if (r.symmetry_defect > options.symmetry_tol) r.flags.push_back("violation:symmetry");
  for (int s = 0; s < p.m; ++s)
    for (int t = s + 1; t < p.m; ++t)
      if (r.pairwise[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] >
          r.l[static_cast<std::size_t>(s)] + r.l[static_cast<std::size_t>(t)] + options.slack)
        r.flags.push_back("violation:triangle");
  if (r.bound.vacuous) {
    r.flags.push_back("vacuous_bound");
  } else {
    for (double v : r.l)
      if (v > r.bound.bound + options.symmetry_tol) {
        r.flags.push_back("violation:bound");
        break;
      }
  }
  return r;
}

}  // namespace cosetlab
