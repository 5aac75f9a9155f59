#pragma once

#include <cstdint>
#include <vector>

#include "cosetlab/group.hpp"
#include "cosetlab/linop.hpp"

namespace cosetlab {

// Basis label of a state: the computational basis {|g>} of `group`, taken
// `copies` times as a tensor power. Two states are comparable only when their
// bases agree.
struct StateBasis {
  GroupPtr group;
  int copies = 1;

  std::size_t dim() const;
  bool operator==(const StateBasis& o) const { return group == o.group && copies == o.copies; }
};

class DensityOperator {
 public:
  // Validates PSD (min eigenvalue >= -1e-9) and unit trace within 1e-9.
  DensityOperator(HermitianOperator op, StateBasis basis);
  // For builders whose output is a state by construction.
  static DensityOperator trusted(HermitianOperator op, StateBasis basis);

  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  std::size_t dim() const { return op_.dim(); }
  const StateBasis& basis() const { return basis_; }

 private:
  DensityOperator(HermitianOperator op, StateBasis basis, bool) : op_(std::move(op)), basis_(std::move(basis)) {}
  HermitianOperator op_;
  StateBasis basis_;
};

// rho_H with entries [x, y] = 1/|G| when x^-1 y is in H, else 0.
DensityOperator coset_state(const GroupPtr& group, const Subgroup& h, const Limits& limits = default_limits());

// I/|G|.
DensityOperator maximally_mixed(const GroupPtr& group, const Limits& limits = default_limits());

// Orthonormal columns |gH> = |H|^-1/2 sum_{h in H} |gh>, one per left coset
// in left_cosets order. Their span is the support of rho_H.
Matrix coset_basis(const FiniteGroup& group, const Subgroup& h);

// A map f: G -> labels constant exactly on left cosets of some subgroup.
class CosetOracle {
 public:
  // Checks f(g) = f(gh) iff h in H for all g, h, where H = {h : f(h) = f(id)}.
  // Throws DomainError otherwise.
  CosetOracle(GroupPtr group, std::vector<std::uint32_t> table);

  const GroupPtr& group() const { return group_; }
  std::uint32_t operator()(Element g) const { return table_[g]; }
  const std::vector<std::uint32_t>& table() const { return table_; }
  const Subgroup& hidden_subgroup() const { return hidden_; }
  std::size_t label_count() const;

  // Same oracle with every label passed through `bijection` (an injective
  // map given as a lookup table indexed by old label).
  CosetOracle relabel(const std::vector<std::uint32_t>& bijection) const;

 private:
  GroupPtr group_;
  std::vector<std::uint32_t> table_;
  Subgroup hidden_;
};

// Labels are the smallest element index of each left coset.
CosetOracle oracle_from_subgroup(const GroupPtr& group, const Subgroup& h);

// Prepares (1/sqrt|G|) sum_g |g>|f(g)> and traces out the label register.
DensityOperator standard_method_state(const CosetOracle& oracle, const Limits& limits = default_limits());

// Phase coset state rho_h^(s) over S_n, with entries
// [x, x h^j] = omega_m^(-js) / n! and zero elsewhere. `group` must be a
// symmetric group and h a product of n/m disjoint m-cycles.
DensityOperator phase_coset_state(const GroupPtr& group, int m, const Permutation& h, int s,
                                  const Limits& limits = default_limits());

// Columns (1/sqrt m) sum_k omega_m^(ks) |g h^k>, one per left coset g<h>.
Matrix phase_coset_basis(const GroupPtr& group, int m, const Permutation& h, int s);

// omega_m^t, exact for m in {1, 2, 4}.
cplx root_of_unity(int m, long long t);

// Equal-weight pure components of a coset state (|G|/|H| of them) or a phase
// coset state (n!/m of them).
PureStateFamily pure_decomposition(const GroupPtr& group, const Subgroup& h);
PureStateFamily pure_decomposition(const GroupPtr& group, int m, const Permutation& h, int s);

// tr(a b). Throws UsageError when bases differ.
double overlap(const DensityOperator& a, const DensityOperator& b);

DensityOperator tensor_power(const DensityOperator& x, int k, const Limits& limits = default_limits());

// rho_{H_i}^{(tensor) k} for member i of the family.
DensityOperator family_state(const CandidateFamily& family, std::size_t i, int k,
                             const Limits& limits = default_limits());

}  // namespace cosetlab
