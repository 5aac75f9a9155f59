#include "cosetlab/linop.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "cosetlab/errors.hpp"

namespace cosetlab {

namespace {

std::size_t checked_power(std::size_t base, int k, std::size_t cap) {
  std::size_t d = 1;
  for (int i = 0; i < k; ++i) {
    if (base != 0 && d > cap / base) return cap + 1;
    d *= base;
  }
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// HermitianOperator

HermitianOperator::HermitianOperator(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw DomainError("operator is not square");
  if (m_.size() == 0) return;
  const double scale = m_.cwiseAbs().maxCoeff();
  const double defect = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (defect > 1e-12 * std::max(scale, 1e-300))
    throw DomainError("operator is not Hermitian (max |A - A^dagger| = " + std::to_string(defect) + ")");
}

HermitianOperator HermitianOperator::hermitian_part(const Matrix& m) {
  if (m.rows() != m.cols()) throw DomainError("operator is not square");
  Matrix h = m;
  h += m.adjoint();
  h *= 0.5;
  return HermitianOperator(std::move(h), Adopt{});
}

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  return HermitianOperator(Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)), Adopt{});
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
  return HermitianOperator(Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)), Adopt{});
}

HermitianOperator HermitianOperator::diagonal(const std::vector<double>& entries) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(entries.size()), static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = entries[i];
  return HermitianOperator(std::move(m), Adopt{});
}

bool HermitianOperator::is_real() const { return (m_.imag().array() == 0.0).all(); }

HermitianOperator HermitianOperator::operator+(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw UsageError("operator dimensions differ");
  return HermitianOperator(m_ + o.m_, Adopt{});
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& o) const {
  if (dim() != o.dim()) throw UsageError("operator dimensions differ");
  return HermitianOperator(m_ - o.m_, Adopt{});
}

HermitianOperator HermitianOperator::operator*(double s) const { return HermitianOperator(m_ * s, Adopt{}); }

// ---------------------------------------------------------------------------
// Eigensolver

Eigensystem eigh(const Matrix& a, bool want_vectors) {
  if (a.rows() != a.cols()) throw DomainError("eigh: matrix is not square");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Eigensystem es;
  es.values.resize(n);
  if (n == 0) {
    es.vectors.resize(0, 0);
    return es;
  }
  const char jobz = want_vectors ? 'V' : 'N';
  lapack_int info = 0;
  if ((a.imag().array() == 0.0).all()) {
    Eigen::MatrixXd work = a.real();
    info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, jobz, 'L', n, work.data(), n, es.values.data());
    if (info == 0 && want_vectors) es.vectors = work.cast<cplx>();
  } else {
    Matrix work = a;
    info = LAPACKE_zheevd(LAPACK_COL_MAJOR, jobz, 'L', n, work.data(), n, es.values.data());
    if (info == 0 && want_vectors) es.vectors = std::move(work);
  }
  if (info != 0) {
    throw NumericError("Hermitian eigensolver failed (LAPACK info " + std::to_string(info) + ", dim " +
                       std::to_string(n) + ", max|a| " + std::to_string(a.cwiseAbs().maxCoeff()) + ")");
  }
  if (!es.values.allFinite()) throw NumericError("Hermitian eigensolver returned non-finite eigenvalues");
  return es;
}

RealVector spectrum(const HermitianOperator& x) { return eigh(x.matrix(), false).values; }

double trace_norm(const HermitianOperator& x) { return spectrum(x).cwiseAbs().sum(); }

double operator_norm(const HermitianOperator& x) {
  const RealVector v = spectrum(x);
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

std::size_t numeric_rank(const HermitianOperator& x, double tol) {
  const RealVector v = spectrum(x);
  if (v.size() == 0) return 0;
  const double top = v.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0;
  return static_cast<std::size_t>((v.array().abs() > tol * top).count());
}

PsdWitness psd_check(const HermitianOperator& x, double tol) {
  const RealVector v = spectrum(x);
  PsdWitness w;
  w.min_eigenvalue = v.size() ? v.minCoeff() : 0.0;
  w.psd = w.min_eigenvalue >= -tol;
  return w;
}

// ---------------------------------------------------------------------------
// Projectors and functional calculus

Projector Projector::from_basis(Matrix basis) {
  const auto r = basis.cols();
  if (r > 0) {
    const double defect = (basis.adjoint() * basis - Matrix::Identity(r, r)).cwiseAbs().maxCoeff();
    if (defect > 1e-9) throw DomainError("projector basis is not orthonormal (defect " + std::to_string(defect) + ")");
  }
  Matrix p = basis * basis.adjoint();
  return Projector(HermitianOperator::hermitian_part(p), std::move(basis));
}

Projector Projector::checked(const HermitianOperator& p, double tol) {
  const Eigensystem es = eigh(p.matrix(), true);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const double v = es.values(i);
    if (std::min(std::abs(v), std::abs(v - 1.0)) > tol)
      throw DomainError("operator has eigenvalue " + std::to_string(v) + " outside {0, 1}");
    if (v > 0.5) keep.push_back(i);
  }
  Matrix basis(static_cast<Eigen::Index>(p.dim()), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) basis.col(static_cast<Eigen::Index>(c)) = es.vectors.col(keep[c]);
  Projector out(p, std::move(basis));
  if (out.idempotence_defect() > tol) throw DomainError("operator is not idempotent");
  return out;
}

double Projector::idempotence_defect() const {
  const Matrix sq = op_.matrix() * op_.matrix();
  return operator_norm(HermitianOperator::hermitian_part(sq - op_.matrix()));
}

double Projector::spectral_defect() const {
  const RealVector v = spectrum(op_);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) worst = std::max(worst, std::min(std::abs(v(i)), std::abs(v(i) - 1.0)));
  return worst;
}

SupportAndInvSqrt support_and_inv_sqrt(const HermitianOperator& x, double tol) {
  const Eigensystem es = eigh(x.matrix(), true);
  const auto n = static_cast<Eigen::Index>(x.dim());
  const double top = n ? es.values.maxCoeff() : 0.0;
  const double cut = tol * std::max(top, 0.0);
  if (n && es.values.minCoeff() < -std::max(cut, tol * es.values.cwiseAbs().maxCoeff()))
    throw DomainError("operator is not positive semidefinite (min eigenvalue " + std::to_string(es.values.minCoeff()) +
                      ", max " + std::to_string(top) + ")");
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < n; ++i)
    if (top > 0.0 && es.values(i) > cut) keep.push_back(i);
  const auto r = static_cast<Eigen::Index>(keep.size());
  Matrix basis(n, r);
  Matrix scaled(n, r);
  for (Eigen::Index c = 0; c < r; ++c) {
    basis.col(c) = es.vectors.col(keep[static_cast<std::size_t>(c)]);
    scaled.col(c) = basis.col(c) / std::sqrt(es.values(keep[static_cast<std::size_t>(c)]));
  }
  Matrix inv_sqrt = scaled * basis.adjoint();
  return {Projector::from_basis(std::move(basis)), HermitianOperator::hermitian_part(inv_sqrt)};
}

Projector support_projector(const HermitianOperator& x, double tol) { return support_and_inv_sqrt(x, tol).support; }

HermitianOperator inv_sqrt_on_support(const HermitianOperator& x, double tol) {
  return support_and_inv_sqrt(x, tol).inv_sqrt;
}

// ---------------------------------------------------------------------------
// Tensor products

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator::hermitian_part(kron(a.matrix(), b.matrix()));
}

Matrix tensor_power(const Matrix& x, int k, const Limits& limits) {
  if (k < 1) throw UsageError("tensor_power: k must be positive");
  const std::size_t rows = checked_power(static_cast<std::size_t>(x.rows()), k, limits.dense_cap);
  if (rows > limits.dense_cap)
    throw CapacityError("tensor_power exceeds the dense cap; use the factored path", rows, limits.dense_cap);
  Matrix out = x;
  for (int i = 1; i < k; ++i) out = kron(out, x);
  return out;
}

HermitianOperator tensor_power(const HermitianOperator& x, int k, const Limits& limits) {
  return HermitianOperator::hermitian_part(tensor_power(x.matrix(), k, limits));
}

cplx trace_product(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) throw UsageError("trace_product: shapes differ");
  return (a.array() * b.transpose().array()).sum();
}

// ---------------------------------------------------------------------------
// PureStateFamily

PureStateFamily::PureStateFamily(std::vector<Matrix> dictionaries, std::vector<std::vector<std::uint32_t>> components,
                                 std::vector<double> weights)
    : dictionaries_(std::move(dictionaries)), components_(std::move(components)), weights_(std::move(weights)) {
  if (dictionaries_.empty()) throw UsageError("pure-state family needs at least one factor");
  if (components_.size() != weights_.size()) throw UsageError("pure-state family: one weight per component");
  for (const auto& d : dictionaries_) {
    for (Eigen::Index c = 0; c < d.cols(); ++c)
      if (std::abs(d.col(c).norm() - 1.0) > 1e-12) throw DomainError("pure-state family: dictionary vector is not unit norm");
  }
  for (const auto& comp : components_) {
    if (comp.size() != dictionaries_.size()) throw UsageError("pure-state family: component has wrong factor count");
    for (std::size_t f = 0; f < comp.size(); ++f)
      if (comp[f] >= static_cast<std::uint32_t>(dictionaries_[f].cols()))
        throw UsageError("pure-state family: dictionary index out of range");
  }
  for (double w : weights_)
    if (!(w >= 0.0)) throw DomainError("pure-state family: negative weight");
}

PureStateFamily PureStateFamily::from_vectors(const std::vector<Vector>& vectors, const std::vector<double>& weights) {
  if (vectors.empty()) throw UsageError("pure-state family is empty");
  Matrix dict(vectors.front().size(), static_cast<Eigen::Index>(vectors.size()));
  std::vector<std::vector<std::uint32_t>> comps;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != dict.rows()) throw UsageError("pure-state family: vector dimensions differ");
    dict.col(static_cast<Eigen::Index>(i)) = vectors[i];
    comps.push_back({static_cast<std::uint32_t>(i)});
  }
  return PureStateFamily({std::move(dict)}, std::move(comps), weights);
}

std::uint64_t PureStateFamily::dim_total() const {
  std::uint64_t d = 1;
  for (const auto& m : dictionaries_) d *= static_cast<std::uint64_t>(m.rows());
  return d;
}

double PureStateFamily::total_weight() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

cplx PureStateFamily::inner(std::size_t i, std::size_t j) const {
  cplx v = 1.0;
  for (std::size_t f = 0; f < dictionaries_.size(); ++f)
    v *= dictionaries_[f].col(components_[i][f]).dot(dictionaries_[f].col(components_[j][f]));
  return v;
}

Vector PureStateFamily::vector(std::size_t i) const {
  Matrix v = dictionaries_[0].col(components_[i][0]);
  for (std::size_t f = 1; f < dictionaries_.size(); ++f) v = kron(v, Matrix(dictionaries_[f].col(components_[i][f])));
  return v.col(0);
}

HermitianOperator PureStateFamily::dense(const Limits& limits) const {
  const std::uint64_t d = dim_total();
  if (d > limits.dense_cap) throw CapacityError("dense mixture exceeds the dense cap", d, limits.dense_cap);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < size(); ++i) {
    const Vector v = vector(i);
    m.noalias() += weights_[i] * v * v.adjoint();
  }
  return HermitianOperator::hermitian_part(m);
}

PureStateFamily tensor(const PureStateFamily& a, const PureStateFamily& b) {
  std::vector<Matrix> dicts = a.dictionaries_;
  dicts.insert(dicts.end(), b.dictionaries_.begin(), b.dictionaries_.end());
  std::vector<std::vector<std::uint32_t>> comps;
  std::vector<double> weights;
  comps.reserve(a.size() * b.size());
  weights.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::vector<std::uint32_t> c = a.components_[i];
      c.insert(c.end(), b.components_[j].begin(), b.components_[j].end());
      comps.push_back(std::move(c));
      weights.push_back(a.weights_[i] * b.weights_[j]);
    }
  }
  return PureStateFamily(std::move(dicts), std::move(comps), std::move(weights));
}

PureStateFamily mix(const std::vector<std::pair<double, PureStateFamily>>& parts) {
  if (parts.empty()) throw UsageError("mix: no families");
  const std::size_t nf = parts.front().second.factors();
  std::vector<Eigen::Index> rows(nf);
  std::vector<Eigen::Index> cols(nf, 0);
  for (std::size_t f = 0; f < nf; ++f) rows[f] = parts.front().second.dictionaries_[f].rows();
  for (const auto& [w, fam] : parts) {
    if (fam.factors() != nf) throw UsageError("mix: factor counts differ");
    for (std::size_t f = 0; f < nf; ++f) {
      if (fam.dictionaries_[f].rows() != rows[f]) throw UsageError("mix: factor dimensions differ");
      cols[f] += fam.dictionaries_[f].cols();
    }
  }
  std::vector<Matrix> dicts(nf);
  for (std::size_t f = 0; f < nf; ++f) dicts[f].resize(rows[f], cols[f]);
  std::vector<std::vector<std::uint32_t>> comps;
  std::vector<double> weights;
  std::vector<Eigen::Index> offset(nf, 0);
  for (const auto& [w, fam] : parts) {
    for (std::size_t f = 0; f < nf; ++f)
      dicts[f].middleCols(offset[f], fam.dictionaries_[f].cols()) = fam.dictionaries_[f];
    for (std::size_t i = 0; i < fam.size(); ++i) {
      std::vector<std::uint32_t> c = fam.components_[i];
      for (std::size_t f = 0; f < nf; ++f) c[f] += static_cast<std::uint32_t>(offset[f]);
      comps.push_back(std::move(c));
      weights.push_back(w * fam.weights_[i]);
    }
    for (std::size_t f = 0; f < nf; ++f) offset[f] += fam.dictionaries_[f].cols();
  }
  return PureStateFamily(std::move(dicts), std::move(comps), std::move(weights));
}

Matrix weighted_gram(const PureStateFamily& fam) {
  const std::size_t n = fam.size();
  std::vector<Matrix> dict_gram;
  for (const auto& d : fam.dictionaries()) dict_gram.push_back(d.adjoint() * d);
  std::vector<double> sw(n);
  for (std::size_t i = 0; i < n; ++i) sw[i] = std::sqrt(fam.weight(i));
  const auto& comps = fam.components();
  Matrix g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      cplx v = sw[i] * sw[j];
      for (std::size_t f = 0; f < dict_gram.size(); ++f) v *= dict_gram[f](comps[i][f], comps[j][f]);
      g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  return g;
}

std::vector<double> mixture_spectrum(const PureStateFamily& fam, const Limits& limits) {
  if (fam.size() == 0) throw UsageError("mixture_spectrum: empty family");
  if (fam.size() > limits.gram_cap) throw CapacityError("Gram matrix exceeds the Gram cap", fam.size(), limits.gram_cap);
  const RealVector v = eigh(weighted_gram(fam), false).values;
  const double top = v.maxCoeff();
  if (top <= 0.0) return {};
  const double cut = limits.rank_tol * top;
  if (v.minCoeff() < -cut)
    throw NumericError("Gram matrix is not positive semidefinite (min eigenvalue " + std::to_string(v.minCoeff()) + ")");
  std::vector<double> out;
  for (Eigen::Index i = v.size(); i-- > 0;)
    if (v(i) > cut) out.push_back(v(i));
  return out;
}

double shifted_trace_norm(const std::vector<double>& nonzero_spectrum, double c, std::uint64_t dim_total) {
  if (nonzero_spectrum.size() > dim_total) throw UsageError("shifted_trace_norm: more eigenvalues than dimensions");
  double s = 0.0;
  for (double l : nonzero_spectrum) s += std::abs(l - c);
  return s + static_cast<double>(dim_total - nonzero_spectrum.size()) * std::abs(c);
}

double shifted_trace_norm(const PureStateFamily& fam, double c, std::uint64_t dim_total, const Limits& limits) {
  return shifted_trace_norm(mixture_spectrum(fam, limits), c, dim_total);
}

// ---------------------------------------------------------------------------
// BlockDiagonal

BlockDiagonal::BlockDiagonal(std::vector<Matrix> blocks) : blocks_(std::move(blocks)) {
  for (const auto& b : blocks_)
    if (b.rows() != b.cols()) throw DomainError("block is not square");
}

std::size_t BlockDiagonal::dim() const {
  std::size_t d = 0;
  for (const auto& b : blocks_) d += static_cast<std::size_t>(b.rows());
  return d;
}

double BlockDiagonal::trace() const {
  double t = 0.0;
  for (const auto& b : blocks_) t += b.trace().real();
  return t;
}

RealVector BlockDiagonal::spectrum() const {
  RealVector all(static_cast<Eigen::Index>(dim()));
  Eigen::Index at = 0;
  for (const auto& b : blocks_) {
    const RealVector v = eigh(HermitianOperator::hermitian_part(b).matrix(), false).values;
    all.segment(at, v.size()) = v;
    at += v.size();
  }
  std::sort(all.data(), all.data() + all.size());
  return all;
}

double trace_norm(const BlockDiagonal& x) { return x.spectrum().cwiseAbs().sum(); }

double shifted_trace_norm(const BlockDiagonal& x, double c) { return (x.spectrum().array() - c).abs().sum(); }

std::size_t numeric_rank(const BlockDiagonal& x, double tol) {
  const RealVector v = x.spectrum();
  if (v.size() == 0) return 0;
  const double top = v.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0;
  return static_cast<std::size_t>((v.array().abs() > tol * top).count());
}

}  // namespace cosetlab
