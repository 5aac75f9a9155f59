#pragma once

#include <cstdint>
#include <random>

#include "cosetlab/linop.hpp"

namespace cosetlab {

using Rng = std::mt19937_64;

// Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix).
Matrix random_unitary(std::size_t dim, Rng& rng);

// Ginibre matrix with i.i.d. standard complex normal entries.
Matrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng);

// G G^dagger for a dim x rank Ginibre G, rescaled to operator norm `norm`.
HermitianOperator random_psd_with_norm(std::size_t dim, std::size_t rank, double norm, Rng& rng);

// Random trace-one density operator of the given rank.
HermitianOperator random_density(std::size_t dim, std::size_t rank, Rng& rng);

HermitianOperator random_hermitian(std::size_t dim, Rng& rng);

// Uniform draw in [0, 1) built from the top 53 bits of one generator output.
inline double unit_uniform(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace cosetlab
