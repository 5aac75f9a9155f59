#pragma once

#include <vector>

#include "cosetlab/group.hpp"
#include "cosetlab/linop.hpp"

namespace cosetlab {

// Block diagonalization of operators on C[G] that commute with left
// translations (every coset state, phase coset state and their sums does).
//
// A cyclic subgroup N = <a> (a of maximal order, smallest index) acts on the
// left; its orbits are the right cosets Nx. The vectors
//   v_{j,x} = r^-1/2 sum_t omega_r^{jt} |a^t x>,  j in Z_r, x a transversal,
// diagonalize left translation by a, so an invariant operator A splits into
// r blocks of size q = |G|/r:
//   B_j[x, y] = <v_{j,x}| A |v_{j,y}>.
// On G^k the blocks of a product A_1 (x) ... (x) A_k are the Kronecker
// products of the factor blocks, indexed by tuples (j_1, ..., j_k).
class SymmetryReduction {
 public:
  explicit SymmetryReduction(GroupPtr group);

  const GroupPtr& group() const { return group_; }
  Element generator() const { return generator_; }
  std::size_t cycle_order() const { return r_; }
  std::size_t block_size() const { return q_; }
  const std::vector<Element>& transversal() const { return transversal_; }

  // max |A[a x, a y] - A[x, y]|.
  double commutation_defect(const Matrix& a) const;

  // The r blocks of A. Throws DomainError when A is not invariant within
  // 1e-10 * max|A|.
  std::vector<Matrix> reduce(const Matrix& a) const;

  // Unitary with columns v_{j,x}, ordered by j then transversal position.
  Matrix basis_change() const;

 private:
  GroupPtr group_;
  Element generator_ = 0;
  std::size_t r_ = 1;
  std::size_t q_ = 1;
  std::vector<Element> transversal_;
};

// One summand weight * (factors[0] (x) ... (x) factors[k-1]) of an operator
// on G^k.
struct ProductTerm {
  double weight = 1.0;
  std::vector<const Matrix*> factors;
};

// Block form of sum_terms weight * (x)_f factors[f] - shift * I on G^k.
// Block b corresponds to the tuple (j_1, ..., j_k) with j_1 most significant.
// Throws CapacityError when the block form does not fit (block_path_fits).
BlockDiagonal block_reduce(const SymmetryReduction& reduction, const std::vector<ProductTerm>& terms, int k,
                           double shift = 0.0, const Limits& limits = default_limits());

// Block size q^k of the reduction on G^k, or block_cap + 1 on overflow.
std::size_t reduced_block_dim(const SymmetryReduction& reduction, int k, const Limits& limits = default_limits());

// Whether the block form on G^k fits both block_cap and block_entries_cap.
bool block_path_fits(const SymmetryReduction& reduction, int k, const Limits& limits = default_limits());

}  // namespace cosetlab
