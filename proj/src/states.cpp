#include "cosetlab/states.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "cosetlab/errors.hpp"

namespace cosetlab {

namespace {

void require_dense(std::size_t dim, const Limits& limits, const char* what) {
  if (dim > limits.dense_cap) throw CapacityError(what, dim, limits.dense_cap);
}

// Element index of h in S_n after checking it is made of n/m disjoint m-cycles.
Element key_element(const FiniteGroup& g, int m, const Permutation& h) {
  if (g.recipe().kind != GroupKind::symmetric) throw UsageError("phase coset states live on a symmetric group");
  const int n = g.recipe().n;
  if (m < 2 || m > n || n % m != 0) throw UsageError("phase coset state needs 2 <= m <= n and m | n");
  if (static_cast<int>(h.size()) != n || !is_permutation(h)) throw UsageError("key is not a permutation of degree n");
  for (int c : cycle_type(h))
    if (c != m) throw UsageError("key " + to_cycle_string(h) + " is not a product of disjoint " + std::to_string(m) + "-cycles");
  return g.from_permutation(h);
}

Subgroup recover_hidden(const GroupPtr& group, const std::vector<std::uint32_t>& table) {
  if (!group) throw UsageError("oracle without a group");
  if (table.size() != group->order()) throw UsageError("oracle table must have one label per group element");
  std::vector<Element> members;
  for (Element g = 0; g < group->order(); ++g)
    if (table[g] == table[group->identity()]) members.push_back(g);
  try {
    return Subgroup(group, members, members);
  } catch (const UsageError&) {
    throw DomainError("oracle level set of the identity is not a subgroup");
  }
}

}  // namespace

std::size_t StateBasis::dim() const {
  std::size_t d = 1;
  for (int i = 0; i < copies; ++i) d *= group->order();
  return d;
}

DensityOperator::DensityOperator(HermitianOperator op, StateBasis basis)
    : op_(std::move(op)), basis_(std::move(basis)) {
  if (!basis_.group) throw UsageError("state basis without a group");
  if (op_.dim() != basis_.dim()) throw UsageError("state dimension does not match its basis");
  if (std::abs(op_.trace() - 1.0) > 1e-9) throw DomainError("state trace is " + std::to_string(op_.trace()));
  const PsdWitness w = psd_check(op_, 1e-9);
  if (!w.psd) throw DomainError("state is not PSD (min eigenvalue " + std::to_string(w.min_eigenvalue) + ")");
}

DensityOperator DensityOperator::trusted(HermitianOperator op, StateBasis basis) {
  return DensityOperator(std::move(op), std::move(basis), true);
}

DensityOperator coset_state(const GroupPtr& group, const Subgroup& h, const Limits& limits) {
  if (h.group() != group) throw UsageError("coset_state: subgroup belongs to a different group");
  const std::size_t n = group->order();
  require_dense(n, limits, "coset state exceeds the dense cap");
  const double v = 1.0 / static_cast<double>(n);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Element x = 0; x < n; ++x) {
    for (Element t : h.members()) {
      const Element y = group->mul(x, t);
      m(x, y) = v;
    }
  }
  return DensityOperator::trusted(HermitianOperator(std::move(m)), {group, 1});
}

DensityOperator maximally_mixed(const GroupPtr& group, const Limits& limits) {
  const std::size_t n = group->order();
  require_dense(n, limits, "maximally mixed state exceeds the dense cap");
  return DensityOperator::trusted(HermitianOperator::identity(n) * (1.0 / static_cast<double>(n)), {group, 1});
}

Matrix coset_basis(const FiniteGroup& group, const Subgroup& h) {
  const auto blocks = left_cosets(group, h);
  const double a = 1.0 / std::sqrt(static_cast<double>(h.order()));
  Matrix b = Matrix::Zero(static_cast<Eigen::Index>(group.order()), static_cast<Eigen::Index>(blocks.size()));
  for (std::size_t c = 0; c < blocks.size(); ++c)
    for (Element e : blocks[c]) b(e, static_cast<Eigen::Index>(c)) = a;
  return b;
}

CosetOracle::CosetOracle(GroupPtr group, std::vector<std::uint32_t> table)
    : group_(std::move(group)), table_(std::move(table)), hidden_(recover_hidden(group_, table_)) {
  const std::size_t n = group_->order();
  for (Element g = 0; g < n; ++g) {
    for (Element h = 0; h < n; ++h) {
      const bool same = table_[g] == table_[group_->mul(g, h)];
      if (same != hidden_.contains(h))
        throw DomainError("oracle is not constant exactly on left cosets (g=" + group_->element_name(g) +
                          ", h=" + group_->element_name(h) + ")");
    }
  }
}

std::size_t CosetOracle::label_count() const {
  std::vector<std::uint32_t> l = table_;
  std::sort(l.begin(), l.end());
  return static_cast<std::size_t>(std::unique(l.begin(), l.end()) - l.begin());
}

CosetOracle CosetOracle::relabel(const std::vector<std::uint32_t>& bijection) const {
  std::map<std::uint32_t, std::uint32_t> image;
  for (std::uint32_t l : table_) {
    if (l >= bijection.size()) throw UsageError("relabel: label outside the bijection table");
    image[l] = bijection[l];
  }
  std::vector<std::uint32_t> seen;
  for (const auto& [from, to] : image) seen.push_back(to);
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) throw UsageError("relabel: map is not injective");
  std::vector<std::uint32_t> t(table_.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = image[table_[i]];
  return CosetOracle(group_, std::move(t));
}

CosetOracle oracle_from_subgroup(const GroupPtr& group, const Subgroup& h) {
  std::vector<std::uint32_t> table(group->order());
  for (const auto& block : left_cosets(*group, h))
    for (Element e : block) table[e] = block.front();
  return CosetOracle(group, std::move(table));
}

DensityOperator standard_method_state(const CosetOracle& oracle, const Limits& limits) {
  const GroupPtr& group = oracle.group();
  const std::size_t n = group->order();
  require_dense(n, limits, "standard method state exceeds the dense cap");
  std::map<std::uint32_t, Eigen::Index> column;
  for (std::uint32_t l : oracle.table()) column.emplace(l, 0);
  Eigen::Index next = 0;
  for (auto& [label, col] : column) col = next++;
  // Purification amplitudes psi[g, f(g)] = 1/sqrt|G|.
  Matrix psi = Matrix::Zero(static_cast<Eigen::Index>(n), next);
  const double a = 1.0 / std::sqrt(static_cast<double>(n));
  for (Element g = 0; g < n; ++g) psi(g, column.at(oracle(g))) = a;
  return DensityOperator::trusted(HermitianOperator::hermitian_part(psi * psi.adjoint()), {group, 1});
}

cplx root_of_unity(int m, long long t) {
  if (m < 1) throw UsageError("root_of_unity: m must be positive");
  long long r = t % m;
  if (r < 0) r += m;
  if ((4 * r) % m == 0) {
    static const cplx quarter[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return quarter[(4 * r) / m];
  }
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(m);
  return {std::cos(angle), std::sin(angle)};
}

DensityOperator phase_coset_state(const GroupPtr& group, int m, const Permutation& h, int s, const Limits& limits) {
  const Element he = key_element(*group, m, h);
  if (s < 0 || s >= m) throw UsageError("message index s must lie in [0, m)");
  const std::size_t n = group->order();
  require_dense(n, limits, "phase coset state exceeds the dense cap");
  const double v = 1.0 / static_cast<double>(n);
  Matrix mat = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (Element x = 0; x < n; ++x) {
    Element y = x;
    for (int j = 0; j < m; ++j) {
      mat(x, y) = v * root_of_unity(m, -static_cast<long long>(j) * s);
      y = group->mul(y, he);
    }
  }
  return DensityOperator::trusted(HermitianOperator::hermitian_part(mat), {group, 1});
}

Matrix phase_coset_basis(const GroupPtr& group, int m, const Permutation& h, int s) {
  const Element he = key_element(*group, m, h);
  if (s < 0 || s >= m) throw UsageError("message index s must lie in [0, m)");
  const std::size_t n = group->order();
  std::vector<bool> used(n, false);
  const double a = 1.0 / std::sqrt(static_cast<double>(m));
  Matrix b = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n / static_cast<std::size_t>(m)));
  Eigen::Index col = 0;
  for (Element g = 0; g < n; ++g) {
    if (used[g]) continue;
    Element y = g;
    for (int k = 0; k < m; ++k) {
      used[y] = true;
      b(y, col) = a * root_of_unity(m, static_cast<long long>(k) * s);
      y = group->mul(y, he);
    }
    ++col;
  }
  return b;
}

PureStateFamily pure_decomposition(const GroupPtr& group, const Subgroup& h) {
  Matrix b = coset_basis(*group, h);
  const std::size_t c = static_cast<std::size_t>(b.cols());
  std::vector<std::vector<std::uint32_t>> comps(c);
  for (std::size_t i = 0; i < c; ++i) comps[i] = {static_cast<std::uint32_t>(i)};
  return PureStateFamily({std::move(b)}, std::move(comps), std::vector<double>(c, 1.0 / static_cast<double>(c)));
}

PureStateFamily pure_decomposition(const GroupPtr& group, int m, const Permutation& h, int s) {
  Matrix b = phase_coset_basis(group, m, h, s);
  const std::size_t c = static_cast<std::size_t>(b.cols());
  std::vector<std::vector<std::uint32_t>> comps(c);
  for (std::size_t i = 0; i < c; ++i) comps[i] = {static_cast<std::uint32_t>(i)};
  return PureStateFamily({std::move(b)}, std::move(comps), std::vector<double>(c, 1.0 / static_cast<double>(c)));
}

double overlap(const DensityOperator& a, const DensityOperator& b) {
  if (!(a.basis() == b.basis())) throw UsageError("overlap: states live in different bases");
  const cplx v = trace_product(a.matrix(), b.matrix());
  if (std::abs(v.imag()) > 1e-12) throw NumericError("overlap has imaginary residue " + std::to_string(v.imag()));
  return v.real();
}

DensityOperator tensor_power(const DensityOperator& x, int k, const Limits& limits) {
  HermitianOperator p = tensor_power(x.op(), k, limits);
  return DensityOperator::trusted(std::move(p), {x.basis().group, x.basis().copies * k});
}

DensityOperator family_state(const CandidateFamily& family, std::size_t i, int k, const Limits& limits) {
  if (i >= family.size()) throw UsageError("family member index out of range");
  return tensor_power(coset_state(family.group(), family[i], limits), k, limits);
}

}  // namespace cosetlab
