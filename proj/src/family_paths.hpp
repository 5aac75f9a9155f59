#pragma once

// Shared k-copy representations of a candidate family, used by the
// measurement and bound computations.

#include <vector>

#include "cosetlab/group.hpp"
#include "cosetlab/linop.hpp"
#include "cosetlab/symmetry.hpp"

namespace cosetlab::detail {

// |G|^k, saturating at SIZE_MAX.
std::size_t power_dim(std::size_t base, int k);

// c_i = (|H_i| / |G|)^k, the nonzero eigenvalue of rho_{H_i}^{(tensor) k}.
std::vector<double> copy_eigenvalues(const CandidateFamily& family, int k);

// Support rank (|G|/|H_i|)^k summed over members.
std::size_t stacked_rank(const CandidateFamily& family, int k);

// Orthonormal support bases of rho_{H_i}^{(tensor) k}, dense |G|^k rows.
std::vector<Matrix> dense_member_bases(const CandidateFamily& family, int k, const Limits& limits);

// All support vectors of all members in factored form; member i's vectors
// carry weight scale[i].
PureStateFamily stacked_family(const CandidateFamily& family, int k, const std::vector<double>& scale);

// Index ranges of member i inside stacked_family.
std::vector<std::size_t> stacked_offsets(const CandidateFamily& family, int k);

// P_{H_i}^{(tensor) k} in the symmetry-adapted block form.
struct BlockedFamily {
  SymmetryReduction reduction;
  std::vector<BlockDiagonal> members;
};
BlockedFamily blocked_family(const CandidateFamily& family, int k, const Limits& limits);

}  // namespace cosetlab::detail
