#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cosetlab/group.hpp"
#include "cosetlab/linop.hpp"
#include "cosetlab/measurements.hpp"

namespace cosetlab {

// (max |H|)^k / |family|: no measurement on k copies identifies the member
// with average success above this. Values above 1 are returned as-is.
double csi_success_cap(const CandidateFamily& family, int k);

// Error caps of the projective PGM on k copies:
//   per_member[i] = 4 sum_{j != i} (gamma_ij / |H_j|)^k
//   uniform       = 4 |family| max_{i != j} (gamma_ij / |H_i|)^k
struct PgmErrorCaps {
  std::vector<double> per_member;
  double uniform = 0.0;
  double max_member() const;
};
// Throws UsageError for a single-member family.
PgmErrorCaps pgm_error_cap(const CandidateFamily& family, int k);

// sqrt((max |H|)^k / |family|), present only when every member has prime
// order and distinct members intersect trivially.
std::optional<double> tcs_tracenorm_cap(const CandidateFamily& family, int k);

// |family| / (min |H|)^k, the false-positive cap of the support-union test.
double tcs_error_cap(const CandidateFamily& family, int k);

// (1/4) || (1/|family|) sum_H rho_H^{(tensor) k} - (I/|G|)^{(tensor) k} ||_1,
// the optimal advantage against the averaged nontrivial state. k = 0 gives 0.
struct AdvantageResult {
  double advantage = 0.0;
  ComputePath path = ComputePath::dense;
};
AdvantageResult measured_tcs_advantage(const CandidateFamily& family, int k, ComputePath path = ComputePath::automatic,
                                       const Limits& limits = default_limits());

// (1/4) || rho_H^{(tensor) k} - (I/|G|)^{(tensor) k} ||_1 for each member.
std::vector<double> member_tcs_advantage(const CandidateFamily& family, int k, const Limits& limits = default_limits());

// Checks I - R S R <= 2(I - S) + 4T with R the generalized inverse square
// root of S + T. Requires 0 <= S <= I and T >= 0 within tol (DomainError
// otherwise). The witness is the smallest eigenvalue of RHS - LHS.
struct HnWitness {
  bool holds = false;
  double min_eigenvalue = 0.0;
};
HnWitness hn_inequality_check(const HermitianOperator& s, const HermitianOperator& t, double tol = 1e-9);

// Random trials: dim uniform in [dim_min, dim_max]; S = Ginibre PSD of random
// rank scaled to ||S|| = u, u uniform in [0, 1]; T likewise with ||T|| uniform
// in [0, 2].
struct HnTrialSummary {
  std::size_t trials = 0;
  std::size_t passed = 0;
  double min_witness = 0.0;
  std::vector<double> witnesses;
};
HnTrialSummary hn_random_trials(std::size_t trials, std::size_t dim_min, std::size_t dim_max, std::uint64_t seed,
                                double tol = 1e-9);

// Smallest k >= 1 with the uniform PGM error cap <= threshold (searching up
// to k_limit), and ceil(log(16|family|/3) / log p) for a prime-order family
// with trivial pairwise intersections.
std::optional<int> pgm_crossover_k(const CandidateFamily& family, double threshold = 0.75, int k_limit = 4096);
std::optional<int> corollary_crossover_bound(const CandidateFamily& family);

struct SweepOptions {
  bool measure_pgm = true;   // measured PGM columns where a path fits
  bool measure_tcs = true;   // measured TCS columns where a path fits
  int workers = 1;           // rows evaluated in parallel
  ComputePath path = ComputePath::automatic;
  Limits limits = default_limits();
  double slack = 1e-8;       // tolerance of the consistency flags
};

// One k of a sweep. Absent measured cells mean no path fit the limits.
struct BoundReport {
  std::string family;
  int k = 0;
  double csi_success_cap = 0.0;
  double pgm_error_bound = 0.0;  // max over members of the per-member cap
  double pgm_error_uniform = 0.0;
  std::optional<double> tcs_tracenorm_bound;
  double tcs_error_bound = 0.0;
  std::optional<double> measured_pgm_success;
  std::optional<double> measured_pgm_worst_error;
  std::optional<double> measured_tcs_advantage;
  std::optional<double> measured_tcs_error;
  std::optional<double> worst_member_tcs_advantage;
  std::vector<double> member_pgm_error;
  std::vector<double> member_pgm_cap;
  std::string pgm_path;
  std::string tcs_path;
  std::vector<std::string> flags;

  bool has_violation() const;
};
using SweepRow = BoundReport;

BoundReport bound_report(const CandidateFamily& family, int k, const SweepOptions& options = {});

// Rows for k = k_min..k_max in increasing order.
std::vector<SweepRow> sweep(const CandidateFamily& family, int k_min, int k_max, const SweepOptions& options = {});

}  // namespace cosetlab
