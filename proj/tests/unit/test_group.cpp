#include <doctest.h>

#include <set>

#include "cosetlab/errors.hpp"
#include "cosetlab/group.hpp"
#include "oracle.hpp"

using namespace cosetlab;

namespace {

std::vector<GroupRecipe> small_groups() {
  return {GroupRecipe::symmetric(3), GroupRecipe::symmetric(4), GroupRecipe::dihedral(4), GroupRecipe::dihedral(6),
          GroupRecipe::cyclic(12), GroupRecipe::semidirect({5}, 2, -1), GroupRecipe::semidirect({7}, 3, 2)};
}

std::set<Element> as_set(const Subgroup& h) { return {h.members().begin(), h.members().end()}; }

}  // namespace

TEST_CASE("orders and identity") {
  CHECK(make_group(GroupRecipe::symmetric(4))->order() == 24);
  CHECK(make_group(GroupRecipe::dihedral(6))->order() == 12);
  CHECK(make_group(GroupRecipe::cyclic(12))->order() == 12);
  CHECK(make_group(GroupRecipe::semidirect({3, 3}, 2, -1))->order() == 18);
  for (const auto& r : small_groups()) {
    const auto g = make_group(r);
    for (Element x = 0; x < g->order(); ++x) {
      CHECK(g->mul(g->identity(), x) == x);
      CHECK(g->mul(x, g->inverse(x)) == g->identity());
    }
    CHECK(g->associativity_defects() == 0);
  }
}

TEST_CASE("recipes parse and print") {
  const auto r = GroupRecipe::parse("kind=semidirect A=Z_3xZ_3 B=Z_2 action=inversion");
  CHECK(r.abelian == std::vector<int>{3, 3});
  CHECK(GroupRecipe::parse(r.to_string()) == r);
  CHECK(GroupRecipe::parse("kind=symmetric n=4") == GroupRecipe::symmetric(4));
  CHECK_THROWS_AS(GroupRecipe::parse("kind=klein"), UsageError);
  CHECK_THROWS_AS(GroupRecipe::parse("kind=cyclic"), UsageError);
  CHECK_THROWS_AS(GroupRecipe::parse("kind=cyclic n=3 extra=1"), UsageError);
}

TEST_CASE("actions that are not automorphisms are rejected") {
  // 2 has order 4 mod 5, so it cannot define an action of Z_2 or Z_3.
  CHECK_THROWS_AS(make_group(GroupRecipe::semidirect({5}, 2, 2)), ConstructionError);
  CHECK_THROWS_AS(make_group(GroupRecipe::semidirect({6}, 2, 2)), ConstructionError);
  CHECK_NOTHROW(make_group(GroupRecipe::semidirect({5}, 4, 2)));
}

TEST_CASE("capacity errors carry requested and limit") {
  Limits tight;
  tight.dense_cap = 100;
  try {
    make_group(GroupRecipe::symmetric(5), tight);
    FAIL("expected CapacityError");
  } catch (const CapacityError& e) {
    CHECK(e.requested() == 120);
    CHECK(e.limit() == 100);
  }
}

TEST_CASE("element names round trip") {
  for (const auto& r : small_groups()) {
    const auto g = make_group(r);
    for (Element x = 0; x < g->order(); ++x) CHECK(g->parse_element(g->element_name(x)) == x);
  }
}

TEST_CASE("subgroup lattice matches brute-force closure of element pairs") {
  const std::vector<std::pair<GroupRecipe, std::size_t>> expected_counts{
      {GroupRecipe::symmetric(3), 6}, {GroupRecipe::symmetric(4), 30}, {GroupRecipe::dihedral(4), 10},
      {GroupRecipe::dihedral(6), 16}, {GroupRecipe::cyclic(12), 6}};
  for (const auto& [recipe, count] : expected_counts) {
    const auto g = make_group(recipe);
    const auto subs = all_subgroups(g);
    CHECK(subs.size() == count);
    std::set<std::set<Element>> got;
    for (const auto& h : subs) got.insert(as_set(h));
    CHECK(got == oracle::two_generated_subgroups(*g));
  }
}

TEST_CASE("Lagrange and coset partition") {
  for (const auto& r : small_groups()) {
    const auto g = make_group(r);
    for (const auto& h : all_subgroups(g)) {
      CHECK(g->order() % h.order() == 0);
      const auto cosets = left_cosets(*g, h);
      CHECK(cosets.size() * h.order() == g->order());
      CHECK(std::vector<Element>(cosets.front()) == h.members());
      std::vector<int> hits(g->order(), 0);
      for (const auto& c : cosets) {
        CHECK(c.size() == h.order());
        for (Element x : c) {
          ++hits[x];
          // x^-1 c[0] lies in H for every x in the same coset
          CHECK(h.contains(g->mul(g->inverse(x), c.front())));
        }
      }
      for (int v : hits) CHECK(v == 1);
    }
  }
}

TEST_CASE("intersection sizes") {
  const auto g = make_group(GroupRecipe::symmetric(4));
  const auto subs = all_subgroups(g);
  for (const auto& a : subs) {
    for (const auto& b : subs) {
      std::size_t common = 0;
      for (Element x : a.members()) common += b.contains(x) ? 1 : 0;
      CHECK(intersection_size(a, b) == common);
    }
  }
}

TEST_CASE("candidate families") {
  const auto d5 = make_group(GroupRecipe::semidirect({5}, 2, -1));
  const auto sdp = candidate_family(d5, FamilySpec::parse("kind=sdp"));
  CHECK(sdp.size() == 5);
  CHECK(sdp.all_prime_order());
  CHECK(sdp.pairwise_trivial_intersections());
  CHECK_FALSE(sdp.has_nested_pair());

  const auto s4 = make_group(GroupRecipe::symmetric(4));
  const auto sym = candidate_family(s4, FamilySpec::parse("kind=sym_involution"));
  CHECK(sym.size() == 3);
  CHECK(sym.max_order() == 2);

  const auto conj = candidate_family(s4, FamilySpec::parse("kind=conjugates gens=(1 2 3)"));
  CHECK(conj.size() == 4);
  const auto p3 = candidate_family(s4, FamilySpec::parse("kind=prime_order_all p=3"));
  CHECK(p3.size() == 4);
  const auto ex = candidate_family(s4, FamilySpec::parse("kind=explicit subgroups=(1 2)|(1 2);(3 4)"));
  CHECK(ex.size() == 2);
  CHECK(ex.has_nested_pair());
  CHECK(ex.gamma(0, 1) == 2);

  CHECK_THROWS_AS(candidate_family(s4, FamilySpec::parse("kind=sdp")), UsageError);
  CHECK_THROWS_AS(candidate_family(d5, FamilySpec::parse("kind=sym_involution")), UsageError);
  CHECK_THROWS_AS(candidate_family(s4, FamilySpec::parse("kind=prime_order_all p=4")), UsageError);
}

TEST_CASE("key sets against the closed-form count") {
  CHECK(key_set(4, 2).size() == 3);
  CHECK(key_count(4, 2) == 3);
  CHECK(key_set(6, 2).size() == 15);
  CHECK(key_count(6, 2) == 15);
  CHECK(key_set(6, 3).size() == 40);
  CHECK(key_set(4, 4).size() == 6);
  for (const auto& k : key_set(6, 3)) CHECK(cycle_type(k) == std::vector<int>{3, 3});
  CHECK_THROWS_AS(key_set(5, 2), UsageError);
  CHECK_THROWS_AS(key_set(10, 2), CapacityError);
}
