#include "cosetlab/symmetry.hpp"

#include <cmath>
#include <map>

#include "cosetlab/errors.hpp"
#include "cosetlab/states.hpp"

namespace cosetlab {

SymmetryReduction::SymmetryReduction(GroupPtr group) : group_(std::move(group)) {
  if (!group_) throw UsageError("symmetry reduction without a group");
  const std::size_t n = group_->order();
  for (Element g = 0; g < n; ++g) {
    const std::size_t o = group_->element_order(g);
    if (o > r_) {
      r_ = o;
      generator_ = g;
    }
  }
  q_ = n / r_;
  std::vector<bool> covered(n, false);
  for (Element x = 0; x < n; ++x) {
    if (covered[x]) continue;
    transversal_.push_back(x);
    Element y = x;
    for (std::size_t t = 0; t < r_; ++t) {
      covered[y] = true;
      y = group_->mul(generator_, y);
    }
  }
  if (transversal_.size() != q_) throw NumericError("orbit count does not match |G|/|<a>|");
}

double SymmetryReduction::commutation_defect(const Matrix& a) const {
  const std::size_t n = group_->order();
  if (static_cast<std::size_t>(a.rows()) != n || a.cols() != a.rows())
    throw UsageError("operator dimension does not match the group order");
  double worst = 0.0;
  for (Element x = 0; x < n; ++x) {
    const Element ax = group_->mul(generator_, x);
    for (Element y = 0; y < n; ++y) worst = std::max(worst, std::abs(a(ax, group_->mul(generator_, y)) - a(x, y)));
  }
  return worst;
}

std::vector<Matrix> SymmetryReduction::reduce(const Matrix& a) const {
  const double scale = a.size() ? a.cwiseAbs().maxCoeff() : 0.0;
  const double defect = commutation_defect(a);
  if (defect > 1e-10 * std::max(scale, 1e-300))
    throw DomainError("operator does not commute with left translations (defect " + std::to_string(defect) + ")");
  // By invariance, B_j[x, y] = sum_t omega_r^{jt} A[x, a^t y].
  std::vector<std::vector<Element>> shifted(q_);
  for (std::size_t c = 0; c < q_; ++c) {
    Element y = transversal_[c];
    for (std::size_t t = 0; t < r_; ++t) {
      shifted[c].push_back(y);
      y = group_->mul(generator_, y);
    }
  }
  std::vector<Matrix> blocks(r_, Matrix::Zero(static_cast<Eigen::Index>(q_), static_cast<Eigen::Index>(q_)));
  for (std::size_t j = 0; j < r_; ++j) {
    for (std::size_t ix = 0; ix < q_; ++ix) {
      for (std::size_t iy = 0; iy < q_; ++iy) {
        cplx v = 0.0;
        for (std::size_t t = 0; t < r_; ++t)
          v += root_of_unity(static_cast<int>(r_), static_cast<long long>(j * t)) * a(transversal_[ix], shifted[iy][t]);
        blocks[j](static_cast<Eigen::Index>(ix), static_cast<Eigen::Index>(iy)) = v;
      }
    }
  }
  return blocks;
}

Matrix SymmetryReduction::basis_change() const {
  const std::size_t n = group_->order();
  Matrix u = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double a = 1.0 / std::sqrt(static_cast<double>(r_));
  for (std::size_t j = 0; j < r_; ++j) {
    for (std::size_t c = 0; c < q_; ++c) {
      Element y = transversal_[c];
      for (std::size_t t = 0; t < r_; ++t) {
        u(y, static_cast<Eigen::Index>(j * q_ + c)) = a * root_of_unity(static_cast<int>(r_), static_cast<long long>(j * t));
        y = group_->mul(generator_, y);
      }
    }
  }
  return u;
}

std::size_t reduced_block_dim(const SymmetryReduction& reduction, int k, const Limits& limits) {
  std::size_t d = 1;
  for (int i = 0; i < k; ++i) {
    d *= reduction.block_size();
    if (d > limits.block_cap) return limits.block_cap + 1;
  }
  return d;
}

bool block_path_fits(const SymmetryReduction& reduction, int k, const Limits& limits) {
  const std::size_t bdim = reduced_block_dim(reduction, k, limits);
  if (bdim > limits.block_cap) return false;
  std::size_t count = 1;
  for (int i = 0; i < k; ++i) {
    count *= reduction.cycle_order();
    if (count > limits.block_entries_cap) return false;
  }
  return count * bdim * bdim <= limits.block_entries_cap;
}

BlockDiagonal block_reduce(const SymmetryReduction& reduction, const std::vector<ProductTerm>& terms, int k,
                           double shift, const Limits& limits) {
  if (k < 1) throw UsageError("block_reduce: k must be positive");
  const std::size_t bdim = reduced_block_dim(reduction, k, limits);
  if (bdim > limits.block_cap) throw CapacityError("reduced block exceeds the block cap", bdim, limits.block_cap);
  if (!block_path_fits(reduction, k, limits))
    throw CapacityError("block form exceeds the block entry cap", reduction.group()->order(), limits.block_entries_cap);
  std::map<const Matrix*, std::vector<Matrix>> cache;
  for (const auto& term : terms) {
    if (static_cast<int>(term.factors.size()) != k) throw UsageError("block_reduce: term has wrong factor count");
    for (const Matrix* f : term.factors)
      if (!cache.count(f)) cache.emplace(f, reduction.reduce(*f));
  }
  const std::size_t r = reduction.cycle_order();
  std::size_t count = 1;
  for (int i = 0; i < k; ++i) count *= r;
  const auto bd = static_cast<Eigen::Index>(bdim);
  std::vector<Matrix> blocks;
  blocks.reserve(count);
  std::vector<std::size_t> tuple(static_cast<std::size_t>(k), 0);
  for (std::size_t b = 0; b < count; ++b) {
    std::size_t rest = b;
    for (int f = k - 1; f >= 0; --f) {
      tuple[static_cast<std::size_t>(f)] = rest % r;
      rest /= r;
    }
    Matrix block = Matrix::Zero(bd, bd);
    for (const auto& term : terms) {
      Matrix prod = cache.at(term.factors[0])[tuple[0]];
      for (int f = 1; f < k; ++f) prod = kron(prod, cache.at(term.factors[static_cast<std::size_t>(f)])[tuple[static_cast<std::size_t>(f)]]);
      block += term.weight * prod;
    }
    if (shift != 0.0) block.diagonal().array() -= shift;
    blocks.push_back(std::move(block));
  }
  return BlockDiagonal(std::move(blocks));
}

}  // namespace cosetlab
