#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cosetlab/group.hpp"
#include "cosetlab/linop.hpp"
#include "cosetlab/states.hpp"

namespace cosetlab {

// Labeled PSD operators summing to the identity.
class POVM {
 public:
  // Validates each element PSD and the sum equal to I, both within tol
  // (entrywise max deviation for completeness).
  POVM(std::vector<std::string> labels, std::vector<HermitianOperator> elements, double tol = 1e-8);
  // Checks only labels, dimensions and completeness; for elements that are
  // PSD by construction.
  static POVM trusted(std::vector<std::string> labels, std::vector<HermitianOperator> elements, double tol = 1e-8);

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return elements_.front().dim(); }
  const std::string& label(std::size_t i) const { return labels_[i]; }
  const HermitianOperator& element(std::size_t i) const { return elements_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> index_of(const std::string& label) const;
  const HermitianOperator& element(const std::string& label) const;

  // max |sum_i M_i - I| entrywise, and the smallest eigenvalue over elements.
  double completeness_defect() const;
  double min_eigenvalue() const;

 private:
  POVM(std::vector<std::string> labels, std::vector<HermitianOperator> elements, double tol, bool check_psd);
  std::vector<std::string> labels_;
  std::vector<HermitianOperator> elements_;
};

struct OutcomeDistribution {
  std::vector<std::string> labels;
  std::vector<double> probabilities;

  double probability(const std::string& label) const;
};

// tr(M_k rho) for every outcome. Values in [-1e-10, 0) are clamped to 0; more
// negative values or a total off by more than 1e-9 raise NumericError.
OutcomeDistribution measure(const POVM& povm, const DensityOperator& state);
OutcomeDistribution measure(const POVM& povm, const HermitianOperator& state);

// Cumulative inversion in outcome order with u drawn by unit_uniform from a
// mt19937_64 seeded with `seed`.
std::size_t sample_index(const OutcomeDistribution& dist, std::uint64_t seed);
std::string sample_outcome(const POVM& povm, const DensityOperator& state, std::uint64_t seed);

// Which representation an expensive family computation runs on.
enum class ComputePath { automatic, dense, gram, block };
std::string to_string(ComputePath p);
ComputePath parse_compute_path(const std::string& text);

// Pretty good measurement on k copies. Elements W A_H W with
// W = Sigma^-1/2 on supp(Sigma), Sigma = sum_H A_H, labeled "H<i>", plus a
// residual "fail" = I - Pi_supp(Sigma).
//   projective: A_H = P_H^{(tensor) k}, the support projector of rho_H^{(tensor) k}
//   states:     A_H = rho_H^{(tensor) k}
enum class PgmWeighting { projective, states };

POVM pgm_projective(const CandidateFamily& family, int k, const Limits& limits = default_limits());
POVM pgm_states(const CandidateFamily& family, int k, const Limits& limits = default_limits());
POVM pgm(const CandidateFamily& family, int k, PgmWeighting weighting, const Limits& limits = default_limits());

// Per-member correct-outcome probabilities tr(M_{H_i} rho_{H_i}^{(tensor) k}).
// The POVM must carry the labels family.label(i).
std::vector<double> member_success(const POVM& povm, const CandidateFamily& family, int k,
                                   const Limits& limits = default_limits());
double average_success(const POVM& povm, const CandidateFamily& family, int k,
                       const Limits& limits = default_limits());

// PGM success probabilities without materializing the POVM.
//   dense: one eigendecomposition of Sigma in dimension |G|^k
//   gram:  Gram matrix of the stacked support bases; the diagonal blocks of
//          its square root give V_H^dagger W V_H directly
//   block: Sigma reduced by left-translation symmetry into small blocks
struct PgmStatistics {
  std::vector<double> member_success;
  double average_success = 0.0;
  ComputePath path = ComputePath::dense;
};
PgmStatistics pgm_statistics(const CandidateFamily& family, int k, PgmWeighting weighting,
                             ComputePath path = ComputePath::automatic, const Limits& limits = default_limits());

// Binary test {T, I - T} labeled "nontrivial" / "trivial", T the projector
// onto the span of all member supports on k copies.
POVM tcs_projector_povm(const CandidateFamily& family, int k, const Limits& limits = default_limits());

struct TcsStatistics {
  std::size_t rank = 0;                   // rank(T)
  std::vector<double> member_acceptance;  // tr(T rho_H^{(tensor) k})
  double false_positive = 0.0;            // tr(T (I/|G|)^{(tensor) k}) = rank(T)/|G|^k
  ComputePath path = ComputePath::dense;
};
TcsStatistics tcs_statistics(const CandidateFamily& family, int k, ComputePath path = ComputePath::automatic,
                             const Limits& limits = default_limits());

// Optimal two-state discrimination. Pi+ projects onto the strictly positive
// eigenspace of a - b; the zero eigenspace goes to the second element.
struct HelstromResult {
  POVM povm;
  double success = 0.0;   // 1/2 + ||a - b||_1 / 4
  double measured = 0.0;  // (tr(Pi+ a) + tr((I - Pi+) b)) / 2
};
HelstromResult helstrom(const HermitianOperator& a, const HermitianOperator& b, const std::string& label_a = "first",
                        const std::string& label_b = "second");
HelstromResult helstrom(const DensityOperator& a, const DensityOperator& b, const std::string& label_a = "first",
                        const std::string& label_b = "second");

// Which path `automatic` resolves to for a family at k copies, given the
// number of pure components the Gram path would need. Returns nullopt when
// no path fits the limits.
std::optional<ComputePath> choose_path(const CandidateFamily& family, int k, std::size_t gram_components,
                                       const Limits& limits = default_limits());

}  // namespace cosetlab
