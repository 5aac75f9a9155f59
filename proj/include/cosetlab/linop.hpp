#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cosetlab/limits.hpp"

namespace cosetlab {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Dense complex Hermitian matrix. The public constructor rejects inputs whose
// anti-Hermitian part exceeds 1e-12 * max|A|.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(Matrix m);

  // Takes the Hermitian part (A + A^dagger) / 2 without validation. For
  // results that are Hermitian up to rounding by construction.
  static HermitianOperator hermitian_part(const Matrix& m);
  static HermitianOperator identity(std::size_t dim);
  static HermitianOperator zero(std::size_t dim);
  static HermitianOperator diagonal(const std::vector<double>& entries);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }
  bool is_real() const;

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator*(double s) const;
  friend HermitianOperator operator*(double s, const HermitianOperator& a) { return a * s; }

 private:
  struct Adopt {};
  HermitianOperator(Matrix m, Adopt) : m_(std::move(m)) {}
  Matrix m_;
};

// Eigen-decomposition with ascending eigenvalues. Real symmetric inputs take
// a real LAPACK path; eigenvectors are always returned complex.
struct Eigensystem {
  RealVector values;
  Matrix vectors;  // empty when only values were requested
};

Eigensystem eigh(const Matrix& a, bool want_vectors = true);
RealVector spectrum(const HermitianOperator& x);

// Orthogonal projector, kept together with an orthonormal basis of its range.
class Projector {
 public:
  // Builds P = B B^dagger from orthonormal columns.
  static Projector from_basis(Matrix basis);
  // Validates idempotence and {0,1} spectrum within tol.
  static Projector checked(const HermitianOperator& p, double tol = 1e-9);

  const HermitianOperator& op() const { return op_; }
  const Matrix& basis() const { return basis_; }
  std::size_t dim() const { return op_.dim(); }
  std::size_t rank() const { return static_cast<std::size_t>(basis_.cols()); }

  // Largest deviations: ||P^2 - P|| (operator norm) and distance of the
  // spectrum from {0, 1}.
  double idempotence_defect() const;
  double spectral_defect() const;

 private:
  Projector(HermitianOperator op, Matrix basis) : op_(std::move(op)), basis_(std::move(basis)) {}
  HermitianOperator op_;
  Matrix basis_;
};

double trace_norm(const HermitianOperator& x);
double operator_norm(const HermitianOperator& x);
std::size_t numeric_rank(const HermitianOperator& x, double tol = 1e-9);

struct PsdWitness {
  bool psd = false;
  double min_eigenvalue = 0.0;
};
PsdWitness psd_check(const HermitianOperator& x, double tol = 1e-9);

// Projector onto eigenvalues > tol * lambda_max. Throws DomainError when some
// eigenvalue is below -tol * lambda_max.
Projector support_projector(const HermitianOperator& x, double tol = 1e-9);

// Generalized inverse square root: lambda^(-1/2) on the same support as
// support_projector, 0 on the kernel.
HermitianOperator inv_sqrt_on_support(const HermitianOperator& x, double tol = 1e-9);

// Both of the above from a single decomposition.
struct SupportAndInvSqrt {
  Projector support;
  HermitianOperator inv_sqrt;
};
SupportAndInvSqrt support_and_inv_sqrt(const HermitianOperator& x, double tol = 1e-9);

Matrix kron(const Matrix& a, const Matrix& b);
HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);

// x^{(tensor) k}; throws CapacityError when dim^k exceeds limits.dense_cap.
HermitianOperator tensor_power(const HermitianOperator& x, int k, const Limits& limits = default_limits());
Matrix tensor_power(const Matrix& x, int k, const Limits& limits = default_limits());

// tr(a b) for Hermitian a, b.
cplx trace_product(const Matrix& a, const Matrix& b);

// ---------------------------------------------------------------------------
// Factored path: mixtures of pure states given by their components only.

// A weighted family of unit vectors. Each component is a tensor product of
// vectors drawn from per-factor dictionaries (columns of `dictionaries[f]`),
// so families over huge tensor-product spaces are represented by small
// dictionaries and index tuples.
class PureStateFamily {
 public:
  PureStateFamily(std::vector<Matrix> dictionaries, std::vector<std::vector<std::uint32_t>> components,
                  std::vector<double> weights);
  static PureStateFamily from_vectors(const std::vector<Vector>& vectors, const std::vector<double>& weights);

  std::size_t size() const { return weights_.size(); }
  std::size_t factors() const { return dictionaries_.size(); }
  std::uint64_t dim_total() const;
  double weight(std::size_t i) const { return weights_[i]; }
  double total_weight() const;
  const std::vector<Matrix>& dictionaries() const { return dictionaries_; }
  const std::vector<std::vector<std::uint32_t>>& components() const { return components_; }

  cplx inner(std::size_t i, std::size_t j) const;
  Vector vector(std::size_t i) const;
  // Dense sum_i w_i |psi_i><psi_i|; subject to limits.dense_cap.
  HermitianOperator dense(const Limits& limits = default_limits()) const;

  // Pairs every component of a with every component of b.
  friend PureStateFamily tensor(const PureStateFamily& a, const PureStateFamily& b);
  // Union of families with matching factor structure; weights are scaled.
  friend PureStateFamily mix(const std::vector<std::pair<double, PureStateFamily>>& parts);

 private:
  std::vector<Matrix> dictionaries_;
  std::vector<std::vector<std::uint32_t>> components_;
  std::vector<double> weights_;
};

PureStateFamily tensor(const PureStateFamily& a, const PureStateFamily& b);
PureStateFamily mix(const std::vector<std::pair<double, PureStateFamily>>& parts);

// G_ij = sqrt(w_i w_j) <psi_i|psi_j>. Its spectrum is the nonzero spectrum of
// the mixture.
Matrix weighted_gram(const PureStateFamily& fam);

// Nonzero eigenvalues (> tol * lambda_max) of sum_i w_i |psi_i><psi_i|,
// descending. Throws NumericError if the Gram matrix is not PSD within tol.
// Subject to limits.gram_cap on the family size.
std::vector<double> mixture_spectrum(const PureStateFamily& fam, const Limits& limits = default_limits());

// ||A - c I||_1 for the mixture A living in a space of dimension dim_total.
double shifted_trace_norm(const PureStateFamily& fam, double c, std::uint64_t dim_total,
                          const Limits& limits = default_limits());
// Same, from an already computed nonzero spectrum.
double shifted_trace_norm(const std::vector<double>& nonzero_spectrum, double c, std::uint64_t dim_total);

// ---------------------------------------------------------------------------
// Block-diagonal operators: a unitary change of basis away from a dense
// Hermitian operator. Produced by the symmetry-adapted path in symmetry.hpp.

class BlockDiagonal {
 public:
  BlockDiagonal() = default;
  explicit BlockDiagonal(std::vector<Matrix> blocks);

  std::size_t dim() const;
  std::size_t num_blocks() const { return blocks_.size(); }
  const std::vector<Matrix>& blocks() const { return blocks_; }
  double trace() const;

  // All eigenvalues, ascending.
  RealVector spectrum() const;

 private:
  std::vector<Matrix> blocks_;
};

double trace_norm(const BlockDiagonal& x);
// ||X - c I||_1.
double shifted_trace_norm(const BlockDiagonal& x, double c);
std::size_t numeric_rank(const BlockDiagonal& x, double tol = 1e-9);

}  // namespace cosetlab
