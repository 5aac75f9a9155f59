#include "cosetlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <random>

#include "cosetlab/errors.hpp"
#include "cosetlab/random.hpp"
#include "family_paths.hpp"

namespace cosetlab {

using namespace detail;

double csi_success_cap(const CandidateFamily& family, int k) {
  if (k < 0) throw UsageError("k must be nonnegative");
  return std::pow(static_cast<double>(family.max_order()), k) / static_cast<double>(family.size());
}

double PgmErrorCaps::max_member() const { return *std::max_element(per_member.begin(), per_member.end()); }

PgmErrorCaps pgm_error_cap(const CandidateFamily& family, int k) {
  if (k < 0) throw UsageError("k must be nonnegative");
  if (family.size() < 2) throw UsageError("PGM error cap needs at least two candidates");
  PgmErrorCaps caps;
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < family.size(); ++j) {
      if (i == j) continue;
      s += std::pow(static_cast<double>(family.gamma(i, j)) / static_cast<double>(family[j].order()), k);
      worst_ratio = std::max(worst_ratio, static_cast<double>(family.gamma(i, j)) / static_cast<double>(family[i].order()));
    }
    caps.per_member.push_back(4.0 * s);
  }
  caps.uniform = 4.0 * static_cast<double>(family.size()) * std::pow(worst_ratio, k);
  return caps;
}

std::optional<double> tcs_tracenorm_cap(const CandidateFamily& family, int k) {
  if (!family.all_prime_order() || !family.pairwise_trivial_intersections()) return std::nullopt;
  return std::sqrt(csi_success_cap(family, k));
}

double tcs_error_cap(const CandidateFamily& family, int k) {
  if (k < 0) throw UsageError("k must be nonnegative");
  return static_cast<double>(family.size()) / std::pow(static_cast<double>(family.min_order()), k);
}

AdvantageResult measured_tcs_advantage(const CandidateFamily& family, int k, ComputePath path, const Limits& limits) {
  if (k < 0) throw UsageError("k must be nonnegative");
  if (k == 0) return {0.0, ComputePath::dense};
  const std::size_t dim = power_dim(family.group()->order(), k);
  const double inv_dim = 1.0 / static_cast<double>(dim);
  const auto c = copy_eigenvalues(family, k);
  const double n = static_cast<double>(family.size());
  if (path == ComputePath::automatic) {
    const auto chosen = choose_path(family, k, stacked_rank(family, k), limits);
    if (!chosen) throw CapacityError("no path fits the TCS advantage computation", stacked_rank(family, k), limits.gram_cap);
    path = *chosen;
  }
  double norm = 0.0;
  switch (path) {
    case ComputePath::dense: {
      const auto bases = dense_member_bases(family, k, limits);
      Matrix x = -inv_dim * Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
      for (std::size_t i = 0; i < bases.size(); ++i) x.noalias() += (c[i] / n) * bases[i] * bases[i].adjoint();
      norm = trace_norm(HermitianOperator::hermitian_part(x));
      break;
    }
    case ComputePath::gram: {
      std::vector<double> scale;
      for (double ci : c) scale.push_back(ci / n);
      norm = shifted_trace_norm(stacked_family(family, k, scale), inv_dim, dim, limits);
      break;
    }
    case ComputePath::block: {
      const SymmetryReduction red(family.group());
      std::vector<Matrix> projectors;
      projectors.reserve(family.size());
      for (const auto& h : family.subgroups()) {
        const Matrix v = coset_basis(*family.group(), h);
        projectors.push_back(v * v.adjoint());
      }
      std::vector<ProductTerm> terms;
      for (std::size_t i = 0; i < family.size(); ++i)
        terms.push_back({c[i] / n, std::vector<const Matrix*>(static_cast<std::size_t>(k), &projectors[i])});
      norm = trace_norm(block_reduce(red, terms, k, inv_dim, limits));
      break;
    }
    case ComputePath::automatic: break;
  }
  return {0.25 * norm, path};
}

std::vector<double> member_tcs_advantage(const CandidateFamily& family, int k, const Limits& limits) {
  if (k < 1) throw UsageError("k must be positive");
  const std::size_t dim = power_dim(family.group()->order(), k);
  std::vector<double> out;
  for (const auto& h : family.subgroups()) {
    const PureStateFamily one = pure_decomposition(family.group(), h);
    PureStateFamily fam = one;
    for (int f = 1; f < k; ++f) fam = tensor(fam, one);
    out.push_back(0.25 * shifted_trace_norm(fam, 1.0 / static_cast<double>(dim), dim, limits));
  }
  return out;
}

HnWitness hn_inequality_check(const HermitianOperator& s, const HermitianOperator& t, double tol) {
  if (s.dim() != t.dim()) throw UsageError("S and T differ in dimension");
  const auto id = HermitianOperator::identity(s.dim());
  const PsdWitness ws = psd_check(s, tol);
  if (!ws.psd) throw DomainError("S is not PSD (min eigenvalue " + std::to_string(ws.min_eigenvalue) + ")");
  const PsdWitness wc = psd_check(id - s, tol);
  if (!wc.psd) throw DomainError("S exceeds I (min eigenvalue of I - S is " + std::to_string(wc.min_eigenvalue) + ")");
  const PsdWitness wt = psd_check(t, tol);
  if (!wt.psd) throw DomainError("T is not PSD (min eigenvalue " + std::to_string(wt.min_eigenvalue) + ")");
  const HermitianOperator r = inv_sqrt_on_support(s + t, default_limits().rank_tol);
  const HermitianOperator lhs = id - HermitianOperator::hermitian_part(r.matrix() * s.matrix() * r.matrix());
  const HermitianOperator rhs = 2.0 * (id - s) + 4.0 * t;
  const PsdWitness w = psd_check(rhs - lhs, tol);
  return {w.psd, w.min_eigenvalue};
}

HnTrialSummary hn_random_trials(std::size_t trials, std::size_t dim_min, std::size_t dim_max, std::uint64_t seed,
                                double tol) {
  if (dim_min < 1 || dim_min > dim_max) throw UsageError("need 1 <= dim_min <= dim_max");
  Rng rng(seed);
  HnTrialSummary out;
  out.min_witness = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trials; ++i) {
    const std::size_t d = std::uniform_int_distribution<std::size_t>(dim_min, dim_max)(rng);
    const std::size_t rank_s = std::uniform_int_distribution<std::size_t>(1, d)(rng);
    const std::size_t rank_t = std::uniform_int_distribution<std::size_t>(1, d)(rng);
    const double u = unit_uniform(rng);
    const double v = 2.0 * unit_uniform(rng);
    const HermitianOperator s = random_psd_with_norm(d, rank_s, u, rng);
    const HermitianOperator t = random_psd_with_norm(d, rank_t, v, rng);
    const HnWitness w = hn_inequality_check(s, t, tol);
    ++out.trials;
    if (w.holds) ++out.passed;
    out.min_witness = std::min(out.min_witness, w.min_eigenvalue);
    out.witnesses.push_back(w.min_eigenvalue);
  }
  if (trials == 0) out.min_witness = 0.0;
  return out;
}

std::optional<int> pgm_crossover_k(const CandidateFamily& family, double threshold, int k_limit) {
  for (int k = 1; k <= k_limit; ++k)
    if (pgm_error_cap(family, k).uniform <= threshold) return k;
  return std::nullopt;
}

std::optional<int> corollary_crossover_bound(const CandidateFamily& family) {
  if (!family.all_prime_order() || !family.pairwise_trivial_intersections()) return std::nullopt;
  if (family.min_order() != family.max_order()) return std::nullopt;
  const double p = static_cast<double>(family.min_order());
  const double v = std::ceil(std::log(16.0 * static_cast<double>(family.size()) / 3.0) / std::log(p));
  return std::max(1, static_cast<int>(v));
}

// ---------------------------------------------------------------------------
// Sweep

bool BoundReport::has_violation() const {
  return std::any_of(flags.begin(), flags.end(), [](const std::string& f) { return f.rfind("violation:", 0) == 0; });
}

BoundReport bound_report(const CandidateFamily& family, int k, const SweepOptions& options) {
  if (k < 0) throw UsageError("k must be nonnegative");
  const Limits& limits = options.limits;
  BoundReport r;
  r.family = family.describe();
  r.k = k;
  r.csi_success_cap = csi_success_cap(family, k);
  if (family.size() >= 2) {
    const PgmErrorCaps caps = pgm_error_cap(family, k);
    r.pgm_error_bound = caps.max_member();
    r.pgm_error_uniform = caps.uniform;
    r.member_pgm_cap = caps.per_member;
  }
  r.tcs_tracenorm_bound = tcs_tracenorm_cap(family, k);
  r.tcs_error_bound = tcs_error_cap(family, k);

  if (r.csi_success_cap >= 1.0) r.flags.push_back("vacuous_csi");
  if (family.size() >= 2 && r.pgm_error_bound >= 1.0) r.flags.push_back("vacuous_pgm");
  if (r.tcs_tracenorm_bound && *r.tcs_tracenorm_bound >= 2.0) r.flags.push_back("vacuous_tracenorm");
  if (!r.tcs_tracenorm_bound) r.flags.push_back("tracenorm_hypothesis_unmet");
  if (r.tcs_error_bound >= 1.0) r.flags.push_back("vacuous_tcs_error");
  if (family.has_nested_pair()) r.flags.push_back("nested_pair");

  const double slack = options.slack;
  if (k == 0) {
    if (options.measure_tcs) r.measured_tcs_advantage = 0.0;
    return r;
  }

  const auto path_for = [&](std::size_t gram_components) -> std::optional<ComputePath> {
    if (options.path != ComputePath::automatic) return options.path;
    return choose_path(family, k, gram_components, limits);
  };
  const auto path = path_for(stacked_rank(family, k));
  if (path && options.measure_pgm) {
    const PgmStatistics pgm = pgm_statistics(family, k, PgmWeighting::projective, *path, limits);
    r.measured_pgm_success = pgm.average_success;
    r.pgm_path = to_string(pgm.path);
    double worst = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
      const double err = 1.0 - pgm.member_success[i];
      r.member_pgm_error.push_back(err);
      worst = std::max(worst, err);
      if (family.size() >= 2 && err > r.member_pgm_cap[i] + slack) r.flags.push_back("violation:pgm_error:" + family.label(i));
    }
    r.measured_pgm_worst_error = worst;
    if (r.csi_success_cap <= 1.0 && pgm.average_success > r.csi_success_cap + slack) r.flags.push_back("violation:csi");
  }
  if (path && options.measure_tcs) {
    const TcsStatistics tcs = tcs_statistics(family, k, *path, limits);
    r.tcs_path = to_string(tcs.path);
    r.measured_tcs_error = tcs.false_positive;
    for (std::size_t i = 0; i < family.size(); ++i)
      if (std::abs(tcs.member_acceptance[i] - 1.0) > slack) r.flags.push_back("violation:tcs_acceptance:" + family.label(i));
    if (tcs.false_positive > r.tcs_error_bound + slack) r.flags.push_back("violation:tcs_error");

    const AdvantageResult adv = measured_tcs_advantage(family, k, *path, limits);
    r.measured_tcs_advantage = adv.advantage;
    if (r.tcs_tracenorm_bound && adv.advantage > 0.25 * *r.tcs_tracenorm_bound + slack)
      r.flags.push_back("violation:tcs_advantage");
  }
  if (options.measure_tcs && power_dim(family.group()->order(), k) <= limits.dense_cap) {
    const auto per_member = member_tcs_advantage(family, k, limits);
    r.worst_member_tcs_advantage = *std::min_element(per_member.begin(), per_member.end());
  }
  return r;
}

std::vector<SweepRow> sweep(const CandidateFamily& family, int k_min, int k_max, const SweepOptions& options) {
  if (k_min < 0 || k_min > k_max) throw UsageError("k range must satisfy 0 <= k_min <= k_max");
  const auto count = static_cast<std::size_t>(k_max - k_min + 1);
  std::vector<SweepRow> rows(count);
  const std::size_t workers = static_cast<std::size_t>(std::max(1, options.workers));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) rows[i] = bound_report(family, k_min + static_cast<int>(i), options);
    return rows;
  }
  // Worker w handles rows w, w + workers, ...; each row is written to its
  // own slot so the output order does not depend on scheduling.
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < count; i += workers) rows[i] = bound_report(family, k_min + static_cast<int>(i), options);
    }));
  }
  for (auto& j : jobs) j.get();
  return rows;
}

}  // namespace cosetlab
