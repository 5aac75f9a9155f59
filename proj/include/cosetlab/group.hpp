#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cosetlab/limits.hpp"
#include "cosetlab/permutation.hpp"

namespace cosetlab {

using Element = std::uint32_t;

enum class GroupKind { cyclic, symmetric, semidirect };

// Construction recipe for a finite group.
//
// Semidirect products are A x| Z_p with A = Z_{a_1} x ... x Z_{a_r} and the
// generator of Z_p acting on A as multiplication by `multiplier` (inversion
// is multiplier -1). Dihedral groups are realized as Z_n x| Z_2 with
// inversion. Elements of a semidirect product have canonical representation
// (a_1, ..., a_r, b) and multiply as (a, b)(a', b') = (a + r^b a', b + b').
struct GroupRecipe {
  GroupKind kind = GroupKind::cyclic;
  int n = 1;                 // cyclic / symmetric degree
  std::vector<int> abelian;  // semidirect: moduli of A
  int p = 2;                 // semidirect: order of the acting cyclic group
  int multiplier = -1;       // semidirect: action a -> multiplier * a

  static GroupRecipe cyclic(int n);
  static GroupRecipe symmetric(int n);
  static GroupRecipe dihedral(int n);
  static GroupRecipe semidirect(std::vector<int> abelian, int p, int multiplier);

  // Parses "kind=dihedral n=6", "kind=symmetric n=4", "kind=cyclic n=12",
  // "kind=semidirect A=Z_5 B=Z_2 action=inversion" (A may be a product such
  // as Z_3xZ_3; action is inversion, trivial, or power:<r>).
  static GroupRecipe parse(std::string_view text);
  std::string to_string() const;

  bool operator==(const GroupRecipe&) const = default;
};

// Multiplication-table-backed finite group. Element indices follow the
// lexicographic order of canonical representations, so index 0 is always the
// identity and matrix bases are reproducible.
class FiniteGroup {
 public:
  std::size_t order() const { return elements_.size(); }
  const GroupRecipe& recipe() const { return recipe_; }
  Element identity() const { return 0; }

  Element mul(Element a, Element b) const { return table_[static_cast<std::size_t>(a) * order() + b]; }
  Element inverse(Element a) const { return inverse_[a]; }
  Element power(Element a, long long e) const;
  std::size_t element_order(Element a) const;

  const std::vector<int>& representation(Element a) const { return elements_[a]; }
  std::optional<Element> index_of(const std::vector<int>& representation) const;

  // Human-readable element: cycle notation for symmetric groups, tuples
  // otherwise. parse_element accepts the same syntax.
  std::string element_name(Element a) const;
  Element parse_element(std::string_view text) const;

  // Symmetric groups only: the permutation an element denotes.
  Permutation permutation(Element a) const;
  Element from_permutation(const Permutation& p) const;

  bool is_abelian() const;

  // Exhaustive associativity check for order <= 64, otherwise `samples`
  // seeded random triples. Returns the number of failing triples.
  std::size_t associativity_defects(std::size_t samples = 20000) const;

 private:
  friend std::shared_ptr<const FiniteGroup> make_group(const GroupRecipe&, const Limits&);
  FiniteGroup() = default;

  std::size_t encode(const std::vector<int>& rep) const;

  GroupRecipe recipe_;
  std::vector<std::vector<int>> elements_;
  std::vector<Element> table_;
  std::vector<Element> inverse_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

// Throws ConstructionError for invalid actions and CapacityError when the
// order exceeds limits.dense_cap.
GroupPtr make_group(const GroupRecipe& recipe, const Limits& limits = default_limits());

class Subgroup {
 public:
  Subgroup(GroupPtr group, std::vector<Element> members, std::vector<Element> generators);

  const GroupPtr& group() const { return group_; }
  std::size_t order() const { return members_.size(); }
  const std::vector<Element>& members() const { return members_; }
  const std::vector<Element>& generators() const { return generators_; }
  bool contains(Element e) const { return mask_[e]; }
  bool is_trivial() const { return members_.size() == 1; }

  std::string name() const;

  bool operator==(const Subgroup& other) const {
    return group_ == other.group_ && members_ == other.members_;
  }

 private:
  GroupPtr group_;
  std::vector<Element> members_;
  std::vector<Element> generators_;
  std::vector<bool> mask_;
};

Subgroup subgroup_closure(const GroupPtr& group, const std::vector<Element>& generators);

// Every subgroup of `group`, ordered by (order, member list). Requires
// order <= limits.subgroup_search_cap.
std::vector<Subgroup> all_subgroups(const GroupPtr& group, const Limits& limits = default_limits());

// Left cosets gH as sorted blocks, ordered by smallest element; the first
// block is H itself.
std::vector<std::vector<Element>> left_cosets(const FiniteGroup& group, const Subgroup& h);

// |H1 n H2|, cross-checked against #{(h, h') in H1 x H2 : h h' = id}.
std::size_t intersection_size(const Subgroup& h1, const Subgroup& h2);

enum class FamilyKind { sdp, sym_involution, conjugates, prime_order_all, explicit_list };

struct FamilySpec {
  FamilyKind kind = FamilyKind::sdp;
  int prime = 0;                                       // prime_order_all
  std::vector<std::string> base_generators;            // conjugates
  std::vector<std::vector<std::string>> explicit_sets;  // explicit_list

  // "kind=sdp", "kind=sym_involution", "kind=prime_order_all p=3",
  // "kind=conjugates gens=(1 2 3);(1 2)", "kind=explicit subgroups=(1 2)|(1 3)"
  // Generators within a subgroup are separated by ';', subgroups by '|'.
  static FamilySpec parse(std::string_view text);
  std::string to_string() const;
};

std::string to_string(FamilyKind kind);

class CandidateFamily {
 public:
  CandidateFamily(GroupPtr group, FamilyKind kind, std::vector<Subgroup> subgroups);

  const GroupPtr& group() const { return group_; }
  FamilyKind kind() const { return kind_; }
  std::size_t size() const { return subgroups_.size(); }
  const Subgroup& operator[](std::size_t i) const { return subgroups_[i]; }
  const std::vector<Subgroup>& subgroups() const { return subgroups_; }

  // gamma(i, j) = |H_i n H_j|.
  std::size_t gamma(std::size_t i, std::size_t j) const { return gamma_[i * size() + j]; }
  std::size_t max_order() const;
  std::size_t min_order() const;
  bool all_prime_order() const;
  bool pairwise_trivial_intersections() const;
  // Some distinct pair has H_i contained in H_j (degenerate for the CSI upper bound).
  bool has_nested_pair() const;

  std::string label(std::size_t i) const { return "H" + std::to_string(i); }
  std::string describe() const;

 private:
  GroupPtr group_;
  FamilyKind kind_;
  std::vector<Subgroup> subgroups_;
  std::vector<std::size_t> gamma_;
};

CandidateFamily candidate_family(const GroupPtr& group, const FamilySpec& spec,
                                 const Limits& limits = default_limits());

// K_n^m: permutations of {0..n-1} made of n/m disjoint m-cycles, in
// lexicographic order. Size is checked against key_count.
std::vector<Permutation> key_set(int n, int m, const Limits& limits = default_limits());

// n! / ((n/m)! m^(n/m)).
std::uint64_t key_count(int n, int m);

bool is_prime(long long v);

}  // namespace cosetlab
