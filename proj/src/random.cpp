#include "cosetlab/random.hpp"

#include <cmath>

#include "cosetlab/errors.hpp"

namespace cosetlab {

Matrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  // Column-major fill order keeps draws reproducible across platforms.
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

Matrix random_unitary(std::size_t dim, Rng& rng) {
  const Matrix g = random_ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const cplx d = r(j, j);
    const double a = std::abs(d);
    if (a > 0.0) q.col(j) *= d / a;
  }
  return q;
}

HermitianOperator random_psd_with_norm(std::size_t dim, std::size_t rank, double norm, Rng& rng) {
  if (dim == 0 || rank == 0) throw UsageError("random_psd_with_norm: dim and rank must be positive");
  if (norm < 0.0) throw UsageError("random_psd_with_norm: norm must be nonnegative");
  const Matrix g = random_ginibre(dim, rank, rng);
  HermitianOperator p = HermitianOperator::hermitian_part(g * g.adjoint());
  const double top = operator_norm(p);
  return p * (norm / top);
}

HermitianOperator random_density(std::size_t dim, std::size_t rank, Rng& rng) {
  if (dim == 0 || rank == 0) throw UsageError("random_density: dim and rank must be positive");
  const Matrix g = random_ginibre(dim, rank, rng);
  const Matrix p = g * g.adjoint();
  return HermitianOperator::hermitian_part(p / p.trace().real());
}

HermitianOperator random_hermitian(std::size_t dim, Rng& rng) {
  const Matrix g = random_ginibre(dim, dim, rng);
  return HermitianOperator::hermitian_part(g);
}

}  // namespace cosetlab
