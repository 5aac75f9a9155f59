#pragma once

#include <cstddef>

namespace cosetlab {

// Capacity and tolerance knobs shared by every module. All operations take a
// Limits by const reference and default to these values.
struct Limits {
  // Largest dimension of a dense operator (group order, |G|^k, n!^(mk+1)).
  std::size_t dense_cap = 4096;
  // Largest Gram matrix the factored pure-state path will diagonalize.
  std::size_t gram_cap = 6000;
  // Largest number of pure components accepted by the factored path at all.
  std::size_t component_cap = 100000;
  // Largest block produced by the symmetry-adapted block path.
  std::size_t block_cap = 1500;
  // Largest total number of stored entries (blocks x block size^2) of one
  // block-diagonal operator.
  std::size_t block_entries_cap = 4000000;
  // Exhaustive subgroup searches run only on groups up to this order.
  std::size_t subgroup_search_cap = 64;
  // key_set enumerates S_n only up to this n.
  int key_enumeration_cap = 8;
  // Eigenvalue cutoff relative to the largest eigenvalue (rank, support,
  // generalized inverse square root).
  double rank_tol = 1e-9;
};

inline const Limits& default_limits() {
  static const Limits limits{};
  return limits;
}

}  // namespace cosetlab
