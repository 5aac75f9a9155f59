#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cosetlab {

// A permutation of {0, ..., n-1} stored as its image list.
// Composition follows function composition: (a * b)(i) = a(b(i)).
using Permutation = std::vector<int>;

Permutation identity_permutation(int n);
Permutation compose(const Permutation& a, const Permutation& b);
Permutation invert(const Permutation& p);
bool is_permutation(const Permutation& p);

// Cycle lengths sorted ascending, including fixed points as 1-cycles.
std::vector<int> cycle_type(const Permutation& p);

// 1-based cycle notation: "(1 2)(3 4)", identity is "()".
std::string to_cycle_string(const Permutation& p);
Permutation parse_cycles(std::string_view text, int n);

// Lexicographic rank among all permutations of the same size (Lehmer code).
std::uint64_t lex_rank(const Permutation& p);
Permutation lex_unrank(std::uint64_t rank, int n);

std::uint64_t factorial(int n);

}  // namespace cosetlab
