#include "cosetlab/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "cosetlab/errors.hpp"
#include "cosetlab/keyvalue.hpp"

namespace cosetlab {

namespace {

long long mod(long long a, long long m) {
  const long long r = a % m;
  return r < 0 ? r + m : r;
}

long long power_mod(long long base, long long e, long long m) {
  long long result = 1 % m;
  base = mod(base, m);
  while (e > 0) {
    if (e & 1) result = result * base % m;
    base = base * base % m;
    e >>= 1;
  }
  return result;
}

int parse_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("expected an integer for " + what + ", got \"" + s + "\"");
  }
}

// "Z_5", "Z5", "Z_3xZ_3" -> {5}, {5}, {3, 3}
std::vector<int> parse_abelian(const std::string& text) {
  std::vector<int> moduli;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    if (part.empty() || (part[0] != 'Z' && part[0] != 'z'))
      throw UsageError("expected a cyclic factor like Z_5, got \"" + part + "\"");
    std::string digits = part.substr(part.size() > 1 && part[1] == '_' ? 2 : 1);
    moduli.push_back(parse_int(digits, "cyclic factor"));
  }
  if (moduli.empty()) throw UsageError("empty abelian group description");
  return moduli;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) {
    const auto b = part.find_first_not_of(" \t");
    const auto e = part.find_last_not_of(" \t");
    if (b != std::string::npos) parts.push_back(part.substr(b, e - b + 1));
  }
  return parts;
}

}  // namespace

// ---------------------------------------------------------------------------
// GroupRecipe

GroupRecipe GroupRecipe::cyclic(int n) {
  GroupRecipe r;
  r.kind = GroupKind::cyclic;
  r.n = n;
  return r;
}

GroupRecipe GroupRecipe::symmetric(int n) {
  GroupRecipe r;
  r.kind = GroupKind::symmetric;
  r.n = n;
  return r;
}

GroupRecipe GroupRecipe::dihedral(int n) { return semidirect({n}, 2, -1); }

GroupRecipe GroupRecipe::semidirect(std::vector<int> abelian, int p, int multiplier) {
  GroupRecipe r;
  r.kind = GroupKind::semidirect;
  r.abelian = std::move(abelian);
  r.p = p;
  r.multiplier = multiplier;
  return r;
}

GroupRecipe GroupRecipe::parse(std::string_view text) {
  auto kv = parse_key_values(text);
  auto take = [&](const std::string& key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end()) throw UsageError("group recipe: missing '" + key + "' in \"" + std::string(text) + "\"");
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  const std::string kind = take("kind");
  GroupRecipe r;
  if (kind == "cyclic") {
    r = cyclic(parse_int(take("n"), "n"));
  } else if (kind == "symmetric") {
    r = symmetric(parse_int(take("n"), "n"));
  } else if (kind == "dihedral") {
    r = dihedral(parse_int(take("n"), "n"));
  } else if (kind == "semidirect") {
    const auto a = parse_abelian(take("A"));
    const auto b = parse_abelian(take("B"));
    if (b.size() != 1) throw UsageError("group recipe: B must be a single cyclic group Z_p");
    const std::string action = take("action");
    int multiplier = 0;
    if (action == "inversion") {
      multiplier = -1;
    } else if (action == "trivial") {
      multiplier = 1;
    } else if (action.rfind("power:", 0) == 0) {
      multiplier = parse_int(action.substr(6), "action power");
    } else {
      throw UsageError("group recipe: unknown action \"" + action + "\"");
    }
    r = semidirect(a, b[0], multiplier);
  } else {
    throw UsageError("group recipe: unknown kind \"" + kind + "\"");
  }
  if (!kv.empty()) throw UsageError("group recipe: unexpected key '" + kv.begin()->first + "'");
  return r;
}

std::string GroupRecipe::to_string() const {
  switch (kind) {
    case GroupKind::cyclic:
      return "kind=cyclic n=" + std::to_string(n);
    case GroupKind::symmetric:
      return "kind=symmetric n=" + std::to_string(n);
    case GroupKind::semidirect: {
      std::string a;
      for (std::size_t i = 0; i < abelian.size(); ++i) a += (i ? "xZ_" : "Z_") + std::to_string(abelian[i]);
      std::string action = multiplier == -1  ? "inversion"
                           : multiplier == 1 ? "trivial"
                                             : "power:" + std::to_string(multiplier);
      return "kind=semidirect A=" + a + " B=Z_" + std::to_string(p) + " action=" + action;
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// FiniteGroup

std::size_t FiniteGroup::encode(const std::vector<int>& rep) const {
  switch (recipe_.kind) {
    case GroupKind::cyclic:
      return static_cast<std::size_t>(rep.at(0));
    case GroupKind::symmetric:
      return static_cast<std::size_t>(lex_rank(rep));
    case GroupKind::semidirect: {
      std::size_t idx = 0;
      for (std::size_t i = 0; i < recipe_.abelian.size(); ++i)
        idx = idx * static_cast<std::size_t>(recipe_.abelian[i]) + static_cast<std::size_t>(rep[i]);
      return idx * static_cast<std::size_t>(recipe_.p) + static_cast<std::size_t>(rep.back());
    }
  }
  return 0;
}

GroupPtr make_group(const GroupRecipe& recipe, const Limits& limits) {
  std::shared_ptr<FiniteGroup> g(new FiniteGroup());
  g->recipe_ = recipe;

  std::size_t order = 1;
  switch (recipe.kind) {
    case GroupKind::cyclic:
      if (recipe.n < 1) throw ConstructionError("cyclic group needs n >= 1");
      order = static_cast<std::size_t>(recipe.n);
      break;
    case GroupKind::symmetric:
      if (recipe.n < 1) throw ConstructionError("symmetric group needs n >= 1");
      if (recipe.n > 12) throw CapacityError("symmetric group degree too large", static_cast<std::size_t>(recipe.n), 12);
      order = static_cast<std::size_t>(factorial(recipe.n));
      break;
    case GroupKind::semidirect: {
      if (recipe.abelian.empty() || recipe.p < 1) throw ConstructionError("semidirect product needs A and p >= 1");
      for (int a : recipe.abelian) {
        if (a < 1) throw ConstructionError("abelian factor moduli must be >= 1");
        const long long r = mod(recipe.multiplier, a);
        if (a > 1 && std::gcd(r, static_cast<long long>(a)) != 1)
          throw ConstructionError("action multiplier " + std::to_string(recipe.multiplier) +
                                  " is not an automorphism of Z_" + std::to_string(a));
        if (power_mod(r, recipe.p, a) != 1 % a)
          throw ConstructionError("action multiplier " + std::to_string(recipe.multiplier) + " does not have order dividing " +
                                  std::to_string(recipe.p) + " on Z_" + std::to_string(a));
        order *= static_cast<std::size_t>(a);
      }
      order *= static_cast<std::size_t>(recipe.p);
      break;
    }
  }
  if (order > limits.dense_cap) throw CapacityError("group order exceeds the dense cap", order, limits.dense_cap);

  // Elements in lexicographic order of their representation.
  g->elements_.resize(order);
  for (std::size_t i = 0; i < order; ++i) {
    switch (recipe.kind) {
      case GroupKind::cyclic:
        g->elements_[i] = {static_cast<int>(i)};
        break;
      case GroupKind::symmetric:
        g->elements_[i] = lex_unrank(i, recipe.n);
        break;
      case GroupKind::semidirect: {
        std::vector<int> rep(recipe.abelian.size() + 1);
        std::size_t rest = i;
        rep.back() = static_cast<int>(rest % static_cast<std::size_t>(recipe.p));
        rest /= static_cast<std::size_t>(recipe.p);
        for (std::size_t c = recipe.abelian.size(); c-- > 0;) {
          rep[c] = static_cast<int>(rest % static_cast<std::size_t>(recipe.abelian[c]));
          rest /= static_cast<std::size_t>(recipe.abelian[c]);
        }
        g->elements_[i] = std::move(rep);
        break;
      }
    }
  }

  // Per-modulus multiplier powers r^b mod a_i for the semidirect action.
  std::vector<std::vector<long long>> twist;
  if (recipe.kind == GroupKind::semidirect) {
    for (int a : recipe.abelian) {
      std::vector<long long> row(static_cast<std::size_t>(recipe.p));
      for (int b = 0; b < recipe.p; ++b) row[static_cast<std::size_t>(b)] = power_mod(mod(recipe.multiplier, a), b, a);
      twist.push_back(std::move(row));
    }
  }

  g->table_.resize(order * order);
  std::vector<int> prod;
  for (std::size_t x = 0; x < order; ++x) {
    const auto& a = g->elements_[x];
    for (std::size_t y = 0; y < order; ++y) {
      const auto& b = g->elements_[y];
      switch (recipe.kind) {
        case GroupKind::cyclic:
          prod = {static_cast<int>((a[0] + b[0]) % recipe.n)};
          break;
        case GroupKind::symmetric:
          prod = compose(a, b);
          break;
        case GroupKind::semidirect: {
          prod.assign(a.size(), 0);
          const auto ba = static_cast<std::size_t>(a.back());
          for (std::size_t c = 0; c < recipe.abelian.size(); ++c) {
            const long long m = recipe.abelian[c];
            prod[c] = static_cast<int>(mod(a[c] + twist[c][ba] * b[c], m));
          }
          prod.back() = (a.back() + b.back()) % recipe.p;
          break;
        }
      }
      g->table_[x * order + y] = static_cast<Element>(g->encode(prod));
    }
  }

  g->inverse_.assign(order, 0);
  for (std::size_t x = 0; x < order; ++x) {
    bool found = false;
    for (std::size_t y = 0; y < order && !found; ++y) {
      if (g->table_[x * order + y] == 0) {
        g->inverse_[x] = static_cast<Element>(y);
        found = true;
      }
    }
    if (!found) throw ConstructionError("element without inverse");
  }
  for (std::size_t x = 0; x < order; ++x) {
    if (g->table_[x] != x || g->table_[x * order] != x) throw ConstructionError("index 0 is not a two-sided identity");
    if (g->table_[static_cast<std::size_t>(g->inverse_[x]) * order + x] != 0)
      throw ConstructionError("left and right inverses differ");
  }
  if (g->associativity_defects() != 0) throw ConstructionError("multiplication is not associative");
  return g;
}

Element FiniteGroup::power(Element a, long long e) const {
  if (e < 0) {
    a = inverse(a);
    e = -e;
  }
  Element result = identity();
  for (long long i = 0; i < e; ++i) result = mul(result, a);
  return result;
}

std::size_t FiniteGroup::element_order(Element a) const {
  std::size_t k = 1;
  for (Element x = a; x != identity(); x = mul(x, a)) ++k;
  return k;
}

std::optional<Element> FiniteGroup::index_of(const std::vector<int>& rep) const {
  switch (recipe_.kind) {
    case GroupKind::cyclic:
      if (rep.size() != 1 || rep[0] < 0 || rep[0] >= recipe_.n) return std::nullopt;
      break;
    case GroupKind::symmetric:
      if (rep.size() != static_cast<std::size_t>(recipe_.n) || !is_permutation(rep)) return std::nullopt;
      break;
    case GroupKind::semidirect:
      if (rep.size() != recipe_.abelian.size() + 1) return std::nullopt;
      for (std::size_t c = 0; c < recipe_.abelian.size(); ++c)
        if (rep[c] < 0 || rep[c] >= recipe_.abelian[c]) return std::nullopt;
      if (rep.back() < 0 || rep.back() >= recipe_.p) return std::nullopt;
      break;
  }
  return static_cast<Element>(encode(rep));
}

std::string FiniteGroup::element_name(Element a) const {
  const auto& rep = elements_[a];
  if (recipe_.kind == GroupKind::symmetric) return to_cycle_string(rep);
  if (recipe_.kind == GroupKind::cyclic) return std::to_string(rep[0]);
  std::string out = "(";
  for (std::size_t i = 0; i < rep.size(); ++i) out += (i ? "," : "") + std::to_string(rep[i]);
  return out + ")";
}

Element FiniteGroup::parse_element(std::string_view text) const {
  if (recipe_.kind == GroupKind::symmetric) return from_permutation(parse_cycles(text, recipe_.n));
  std::string body(text);
  body.erase(std::remove_if(body.begin(), body.end(), [](char c) { return c == '(' || c == ')' || c == ' '; }),
             body.end());
  std::vector<int> rep;
  for (const auto& part : split(body, ',')) rep.push_back(parse_int(part, "element coordinate"));
  auto idx = index_of(rep);
  if (!idx) throw UsageError("\"" + std::string(text) + "\" is not an element of " + recipe_.to_string());
  return *idx;
}

Permutation FiniteGroup::permutation(Element a) const {
  if (recipe_.kind != GroupKind::symmetric) throw UsageError("permutation(): group is not symmetric");
  return elements_[a];
}

Element FiniteGroup::from_permutation(const Permutation& p) const {
  if (recipe_.kind != GroupKind::symmetric) throw UsageError("from_permutation(): group is not symmetric");
  auto idx = index_of(p);
  if (!idx) throw UsageError("not a permutation of the right degree");
  return *idx;
}

bool FiniteGroup::is_abelian() const {
  for (Element a = 0; a < order(); ++a)
    for (Element b = a + 1; b < order(); ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

std::size_t FiniteGroup::associativity_defects(std::size_t samples) const {
  const auto n = static_cast<Element>(order());
  std::size_t defects = 0;
  auto check = [&](Element a, Element b, Element c) {
    if (mul(mul(a, b), c) != mul(a, mul(b, c))) ++defects;
  };
  if (n <= 64) {
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b)
        for (Element c = 0; c < n; ++c) check(a, b, c);
  } else {
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<Element> pick(0, n - 1);
    for (std::size_t s = 0; s < samples; ++s) check(pick(rng), pick(rng), pick(rng));
  }
  return defects;
}

// ---------------------------------------------------------------------------
// Subgroup

Subgroup::Subgroup(GroupPtr group, std::vector<Element> members, std::vector<Element> generators)
    : group_(std::move(group)), members_(std::move(members)), generators_(std::move(generators)) {
  if (!group_) throw UsageError("subgroup without a parent group");
  const std::size_t n = group_->order();
  if (members_.empty() || !std::is_sorted(members_.begin(), members_.end()) ||
      std::adjacent_find(members_.begin(), members_.end()) != members_.end() || members_.back() >= n)
    throw UsageError("subgroup members must be sorted, distinct element indices");
  if (members_.front() != group_->identity()) throw UsageError("subgroup does not contain the identity");
  if (n % members_.size() != 0) throw UsageError("subgroup order does not divide the group order");
  mask_.assign(n, false);
  for (Element e : members_) mask_[e] = true;
  for (Element g : generators_)
    if (g >= n || !mask_[g]) throw UsageError("subgroup generator is not a member");
  for (Element a : members_) {
    if (!mask_[group_->inverse(a)]) throw UsageError("subgroup is not closed under inverses");
    for (Element b : members_)
      if (!mask_[group_->mul(a, b)]) throw UsageError("subgroup is not closed under multiplication");
  }
}

std::string Subgroup::name() const {
  std::string out = "<";
  for (std::size_t i = 0; i < generators_.size(); ++i) out += (i ? ", " : "") + group_->element_name(generators_[i]);
  return out + ">";
}

Subgroup subgroup_closure(const GroupPtr& group, const std::vector<Element>& generators) {
  const std::size_t n = group->order();
  for (Element g : generators)
    if (g >= n) throw UsageError("generator index " + std::to_string(g) + " is not an element");
  std::vector<bool> mask(n, false);
  std::vector<Element> members{group->identity()};
  mask[group->identity()] = true;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (Element s : generators) {
      const Element y = group->mul(members[i], s);
      if (!mask[y]) {
        mask[y] = true;
        members.push_back(y);
      }
    }
  }
  std::sort(members.begin(), members.end());
  return Subgroup(group, std::move(members), generators);
}

std::vector<Subgroup> all_subgroups(const GroupPtr& group, const Limits& limits) {
  if (group->order() > limits.subgroup_search_cap)
    throw CapacityError("exhaustive subgroup search", group->order(), limits.subgroup_search_cap);
  std::set<std::vector<Element>> seen;
  std::vector<Subgroup> subs;
  std::vector<Element> cyclic_generators;
  for (Element g = 0; g < group->order(); ++g) {
    Subgroup c = subgroup_closure(group, {g});
    if (seen.insert(c.members()).second) {
      subs.push_back(c);
      cyclic_generators.push_back(g);
    }
  }
  // Every subgroup is a join of cyclic subgroups.
  for (std::size_t i = 0; i < subs.size(); ++i) {
    for (Element c : cyclic_generators) {
      if (subs[i].contains(c)) continue;
      std::vector<Element> gens = subs[i].generators();
      gens.push_back(c);
      Subgroup joined = subgroup_closure(group, gens);
      if (seen.insert(joined.members()).second) subs.push_back(std::move(joined));
    }
  }
  std::sort(subs.begin(), subs.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.members() < b.members();
  });
  return subs;
}

std::vector<std::vector<Element>> left_cosets(const FiniteGroup& group, const Subgroup& h) {
  if (h.group().get() != &group) throw UsageError("left_cosets: subgroup belongs to a different group");
  std::vector<bool> assigned(group.order(), false);
  std::vector<std::vector<Element>> blocks;
  for (Element g = 0; g < group.order(); ++g) {
    if (assigned[g]) continue;
    std::vector<Element> block;
    block.reserve(h.order());
    for (Element x : h.members()) {
      const Element y = group.mul(g, x);
      assigned[y] = true;
      block.push_back(y);
    }
    std::sort(block.begin(), block.end());
    blocks.push_back(std::move(block));
  }
  return blocks;
}

std::size_t intersection_size(const Subgroup& h1, const Subgroup& h2) {
  if (h1.group() != h2.group()) throw UsageError("intersection_size: subgroups of different groups");
  std::size_t common = 0;
  for (Element e : h1.members())
    if (h2.contains(e)) ++common;
  std::size_t pairs = 0;
  const auto& g = *h1.group();
  for (Element a : h1.members())
    for (Element b : h2.members())
      if (g.mul(a, b) == g.identity()) ++pairs;
  if (pairs != common) throw NumericError("intersection count disagrees with inverse-pair count");
  return common;
}

// ---------------------------------------------------------------------------
// Candidate families

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::sdp:
      return "sdp";
    case FamilyKind::sym_involution:
      return "sym_involution";
    case FamilyKind::conjugates:
      return "conjugates";
    case FamilyKind::prime_order_all:
      return "prime_order_all";
    case FamilyKind::explicit_list:
      return "explicit";
  }
  return {};
}

FamilySpec FamilySpec::parse(std::string_view text) {
  auto kv = parse_key_values(text);
  auto it = kv.find("kind");
  if (it == kv.end()) throw UsageError("family: missing 'kind' in \"" + std::string(text) + "\"");
  const std::string kind = it->second;
  kv.erase(it);
  FamilySpec spec;
  auto take = [&](const std::string& key) {
    auto f = kv.find(key);
    if (f == kv.end()) throw UsageError("family " + kind + ": missing '" + key + "'");
    std::string v = f->second;
    kv.erase(f);
    return v;
  };
  if (kind == "sdp") {
    spec.kind = FamilyKind::sdp;
  } else if (kind == "sym_involution") {
    spec.kind = FamilyKind::sym_involution;
  } else if (kind == "prime_order_all") {
    spec.kind = FamilyKind::prime_order_all;
    spec.prime = parse_int(take("p"), "p");
  } else if (kind == "conjugates") {
    spec.kind = FamilyKind::conjugates;
    spec.base_generators = split(take("gens"), ';');
  } else if (kind == "explicit") {
    spec.kind = FamilyKind::explicit_list;
    for (const auto& group_text : split(take("subgroups"), '|')) spec.explicit_sets.push_back(split(group_text, ';'));
  } else {
    throw UsageError("family: unknown kind \"" + kind + "\"");
  }
  if (!kv.empty()) throw UsageError("family: unexpected key '" + kv.begin()->first + "'");
  return spec;
}

std::string FamilySpec::to_string() const {
  auto join = [](const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
  };
  switch (kind) {
    case FamilyKind::prime_order_all:
      return "kind=prime_order_all p=" + std::to_string(prime);
    case FamilyKind::conjugates:
      return "kind=conjugates gens=" + join(base_generators, ";");
    case FamilyKind::explicit_list: {
      std::vector<std::string> groups;
      for (const auto& s : explicit_sets) groups.push_back(join(s, ";"));
      return "kind=explicit subgroups=" + join(groups, "|");
    }
    default:
      return "kind=" + cosetlab::to_string(kind);
  }
}

CandidateFamily::CandidateFamily(GroupPtr group, FamilyKind kind, std::vector<Subgroup> subgroups)
    : group_(std::move(group)), kind_(kind), subgroups_(std::move(subgroups)) {
  if (subgroups_.empty()) throw UsageError("candidate family is empty");
  const std::size_t n = subgroups_.size();
  for (const auto& h : subgroups_)
    if (h.group() != group_) throw UsageError("candidate family mixes subgroups of different groups");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (subgroups_[i].members() == subgroups_[j].members())
        throw UsageError("candidate family contains the subgroup " + subgroups_[i].name() + " twice");
  gamma_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const std::size_t g = intersection_size(subgroups_[i], subgroups_[j]);
      gamma_[i * n + j] = g;
      gamma_[j * n + i] = g;
    }
  }
}

std::size_t CandidateFamily::max_order() const {
  std::size_t m = 0;
  for (const auto& h : subgroups_) m = std::max(m, h.order());
  return m;
}

std::size_t CandidateFamily::min_order() const {
  std::size_t m = subgroups_.front().order();
  for (const auto& h : subgroups_) m = std::min(m, h.order());
  return m;
}

bool is_prime(long long v) {
  if (v < 2) return false;
  for (long long d = 2; d * d <= v; ++d)
    if (v % d == 0) return false;
  return true;
}

bool CandidateFamily::all_prime_order() const {
  return std::all_of(subgroups_.begin(), subgroups_.end(),
                     [](const Subgroup& h) { return is_prime(static_cast<long long>(h.order())); });
}

bool CandidateFamily::pairwise_trivial_intersections() const {
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (i != j && gamma(i, j) != 1) return false;
  return true;
}

bool CandidateFamily::has_nested_pair() const {
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j)
      if (i != j && gamma(i, j) == subgroups_[i].order()) return true;
  return false;
}

std::string CandidateFamily::describe() const {
  return to_string(kind_) + " family of " + std::to_string(size()) + " subgroups in " + group_->recipe().to_string();
}

CandidateFamily candidate_family(const GroupPtr& group, const FamilySpec& spec, const Limits& limits) {
  const auto& recipe = group->recipe();
  std::vector<Subgroup> subs;
  std::set<std::vector<Element>> seen;
  auto add = [&](Subgroup h) {
    if (seen.insert(h.members()).second) subs.push_back(std::move(h));
  };

  switch (spec.kind) {
    case FamilyKind::sdp: {
      if (recipe.kind != GroupKind::semidirect) throw UsageError("sdp family requires a semidirect group");
      for (Element e = 0; e < group->order(); ++e)
        if (group->representation(e).back() == 1) add(subgroup_closure(group, {e}));
      break;
    }
    case FamilyKind::sym_involution: {
      if (recipe.kind != GroupKind::symmetric || recipe.n % 2 != 0)
        throw UsageError("sym_involution family requires a symmetric group of even degree");
      for (Element e = 0; e < group->order(); ++e) {
        const auto& p = group->representation(e);
        const auto type = cycle_type(p);
        if (std::all_of(type.begin(), type.end(), [](int c) { return c == 2; })) add(subgroup_closure(group, {e}));
      }
      break;
    }
    case FamilyKind::conjugates: {
      if (spec.base_generators.empty()) throw UsageError("conjugates family needs base generators");
      std::vector<Element> base;
      for (const auto& t : spec.base_generators) base.push_back(group->parse_element(t));
      for (Element g = 0; g < group->order(); ++g) {
        std::vector<Element> conj;
        for (Element b : base) conj.push_back(group->mul(group->mul(group->inverse(g), b), g));
        add(subgroup_closure(group, conj));
      }
      break;
    }
    case FamilyKind::prime_order_all: {
      if (!is_prime(spec.prime)) throw UsageError("prime_order_all needs a prime p, got " + std::to_string(spec.prime));
      if (group->order() > limits.subgroup_search_cap)
        throw CapacityError("exhaustive prime-order subgroup search", group->order(), limits.subgroup_search_cap);
      for (Element e = 0; e < group->order(); ++e)
        if (group->element_order(e) == static_cast<std::size_t>(spec.prime)) add(subgroup_closure(group, {e}));
      if (subs.empty()) throw UsageError("group has no subgroup of order " + std::to_string(spec.prime));
      break;
    }
    case FamilyKind::explicit_list: {
      for (const auto& gens_text : spec.explicit_sets) {
        std::vector<Element> gens;
        for (const auto& t : gens_text) gens.push_back(group->parse_element(t));
        subs.push_back(subgroup_closure(group, gens));
      }
      break;
    }
  }
  return CandidateFamily(group, spec.kind, std::move(subs));
}

// ---------------------------------------------------------------------------
// Key sets

std::uint64_t key_count(int n, int m) {
  if (m < 1 || n % m != 0) throw UsageError("key_count: m must divide n");
  const int cycles = n / m;
  std::uint64_t denom = factorial(cycles);
  for (int i = 0; i < cycles; ++i) denom *= static_cast<std::uint64_t>(m);
  return factorial(n) / denom;
}

std::vector<Permutation> key_set(int n, int m, const Limits& limits) {
  if (m < 2 || m > n || n % m != 0)
    throw UsageError("key_set: need 2 <= m <= n and m | n (n=" + std::to_string(n) + ", m=" + std::to_string(m) + ")");
  if (n > limits.key_enumeration_cap)
    throw CapacityError("key_set: S_n enumeration", static_cast<std::size_t>(n),
                        static_cast<std::size_t>(limits.key_enumeration_cap));
  std::vector<Permutation> keys;
  Permutation p = identity_permutation(n);
  const std::vector<int> target(static_cast<std::size_t>(n / m), m);
  do {
    if (cycle_type(p) == target) keys.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  if (keys.size() != key_count(n, m)) throw NumericError("key_set size disagrees with the closed-form count");
  return keys;
}

}  // namespace cosetlab
