#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cosetlab/errors.hpp"
#include "cosetlab/linop.hpp"
#include "cosetlab/random.hpp"
#include "oracle.hpp"

using namespace cosetlab;

TEST_CASE("Hermitian constructor rejects non-Hermitian input") {
  Matrix a(2, 2);
  a << 1.0, cplx(0, 1), cplx(0, 1), 2.0;
  CHECK_THROWS_AS(HermitianOperator{a}, DomainError);
  CHECK_THROWS_AS(HermitianOperator{Matrix::Zero(2, 3)}, DomainError);
  CHECK(HermitianOperator::hermitian_part(a).matrix()(0, 1) == cplx(0, 0));
}

TEST_CASE("property: eigenvalues agree with Jacobi on random Hermitian matrices") {
  oracle::SplitMix gen{11};
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 1 + gen.below(12);
    Matrix a = gen.hermitian(dim);
    if (trial % 3 == 0) a = a.real().cast<cplx>();  // exercises the real LAPACK path
    const auto ref = oracle::jacobi_eigenvalues(a);
    const auto es = eigh(a);
    REQUIRE(es.values.size() == dim);
    for (int i = 0; i < dim; ++i) CHECK(es.values(i) == doctest::Approx(ref[static_cast<std::size_t>(i)]).epsilon(1e-10));
    const Matrix recon = es.vectors * es.values.cast<cplx>().asDiagonal() * es.vectors.adjoint();
    CHECK(oracle::max_abs(recon - a) < 1e-11);
    CHECK(trace_norm(HermitianOperator(a)) == doctest::Approx(oracle::trace_norm(a)).epsilon(1e-10));
  }
}

TEST_CASE("norms and rank of simple operators") {
  const auto d = HermitianOperator::diagonal({3.0, -1.0, 0.0, 0.5});
  CHECK(trace_norm(d) == doctest::Approx(4.5));
  CHECK(operator_norm(d) == doctest::Approx(3.0));
  CHECK(numeric_rank(d) == 3);  // nonzero eigenvalues of either sign
  CHECK_FALSE(psd_check(d).psd);
  CHECK(psd_check(HermitianOperator::identity(3)).psd);
  CHECK(numeric_rank(HermitianOperator::zero(3)) == 0);
}

TEST_CASE("projectors") {
  Matrix b = Matrix::Zero(3, 2);
  b(0, 0) = 1.0;
  b(1, 1) = cplx(0, 1);
  const auto p = Projector::from_basis(b);
  CHECK(p.rank() == 2);
  CHECK(p.idempotence_defect() < 1e-15);
  CHECK(p.spectral_defect() < 1e-15);
  b(2, 1) = 0.5;
  CHECK_THROWS_AS(Projector::from_basis(b), DomainError);
  CHECK_THROWS_AS(Projector::checked(HermitianOperator::diagonal({1.0, 0.5})), DomainError);
  CHECK_NOTHROW(Projector::checked(HermitianOperator::diagonal({1.0, 0.0})));
}

TEST_CASE("property: support projector and generalized inverse square root") {
  Rng rng(5);
  oracle::SplitMix gen{5};
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t dim = 2 + static_cast<std::size_t>(gen.below(10));
    const std::size_t rank = 1 + static_cast<std::size_t>(gen.below(static_cast<int>(dim)));
    const auto s = random_psd_with_norm(dim, rank, 0.1 + gen.uniform(), rng);
    const auto [support, r] = support_and_inv_sqrt(s);
    CHECK(support.rank() == rank);
    CHECK(numeric_rank(s) == rank);
    CHECK(static_cast<int>(rank) == oracle::rank(s.matrix()));
    // R S R is the support projector and R commutes with S.
    const Matrix rsr = r.matrix() * s.matrix() * r.matrix();
    CHECK(oracle::max_abs(rsr - support.op().matrix()) < 1e-8);
    CHECK(oracle::max_abs(support.op().matrix() * s.matrix() - s.matrix()) < 1e-10);
  }
  CHECK_THROWS_AS(support_projector(HermitianOperator::diagonal({1.0, -0.5})), DomainError);
}

TEST_CASE("random constructions") {
  Rng rng(9);
  const auto u = random_unitary(6, rng);
  CHECK(oracle::max_abs(u.adjoint() * u - Matrix::Identity(6, 6)) < 1e-12);
  const auto rho = random_density(5, 3, rng);
  CHECK(rho.trace() == doctest::Approx(1.0));
  CHECK(numeric_rank(rho) == 3);
  const auto s = random_psd_with_norm(7, 2, 0.25, rng);
  CHECK(operator_norm(s) == doctest::Approx(0.25));
  Rng a(3), b(3);
  CHECK(random_hermitian(4, a).matrix() == random_hermitian(4, b).matrix());
  for (int i = 0; i < 1000; ++i) {
    const double v = unit_uniform(rng);
    CHECK((v >= 0.0 && v < 1.0));
  }
}

TEST_CASE("Kronecker products and tensor powers") {
  oracle::SplitMix gen{2};
  const Matrix a = gen.hermitian(2), b = gen.hermitian(3);
  CHECK(oracle::max_abs(kron(a, b) - oracle::kron(a, b)) < 1e-15);
  CHECK(oracle::max_abs(tensor_power(a, 3) - oracle::power(a, 3)) < 1e-15);
  Limits tight;
  tight.dense_cap = 7;
  CHECK_THROWS_AS(tensor_power(a, 3, tight), CapacityError);
  CHECK_THROWS_AS(tensor_power(a, 0), UsageError);
  CHECK(trace_product(a, b.topLeftCorner(2, 2)) == (a * b.topLeftCorner(2, 2)).trace());
}

namespace {

PureStateFamily random_family(oracle::SplitMix& gen, Rng& rng) {
  const int factors = 1 + gen.below(2);
  std::vector<Matrix> dicts;
  for (int f = 0; f < factors; ++f) {
    const int rows = 2 + gen.below(4);
    Matrix d = random_ginibre(static_cast<std::size_t>(rows), static_cast<std::size_t>(1 + gen.below(4)), rng);
    for (Eigen::Index c = 0; c < d.cols(); ++c) d.col(c).normalize();
    dicts.push_back(d);
  }
  const int count = 1 + gen.below(10);
  std::vector<std::vector<std::uint32_t>> comps;
  std::vector<double> weights;
  for (int i = 0; i < count; ++i) {
    std::vector<std::uint32_t> c;
    for (const auto& d : dicts) c.push_back(static_cast<std::uint32_t>(gen.below(static_cast<int>(d.cols()))));
    comps.push_back(c);
    weights.push_back(gen.uniform());
  }
  return PureStateFamily(dicts, comps, weights);
}

}  // namespace

TEST_CASE("property: Gram spectrum equals the dense mixture spectrum on 100 random families") {
  oracle::SplitMix gen{42};
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const auto fam = random_family(gen, rng);
    const auto dense = fam.dense();
    const auto ref = oracle::jacobi_eigenvalues(dense.matrix());
    const auto nz = mixture_spectrum(fam);
    CHECK(fam.total_weight() == doctest::Approx(dense.trace()).epsilon(1e-12));
    // every reported eigenvalue appears in the dense spectrum; the rest is zero
    std::vector<double> desc(ref.rbegin(), ref.rend());
    REQUIRE(nz.size() <= desc.size());
    for (std::size_t i = 0; i < nz.size(); ++i) CHECK(std::abs(nz[i] - desc[i]) < 1e-10);
    for (std::size_t i = nz.size(); i < desc.size(); ++i) CHECK(std::abs(desc[i]) < 1e-9);
    const double c = gen.uniform() / static_cast<double>(dense.dim());
    const Matrix shifted = dense.matrix() - c * Matrix::Identity(dense.dim(), dense.dim());
    CHECK(shifted_trace_norm(fam, c, fam.dim_total()) == doctest::Approx(oracle::trace_norm(shifted)).epsilon(1e-9));
    for (std::size_t i = 0; i < fam.size(); ++i) CHECK(std::abs(fam.vector(i).norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("pure-state family validation and composition") {
  Matrix d = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(PureStateFamily({2.0 * d}, {{0}}, {1.0}), DomainError);
  CHECK_THROWS_AS(PureStateFamily({d}, {{2}}, {1.0}), UsageError);
  CHECK_THROWS_AS(PureStateFamily({d}, {{0}}, {-1.0}), DomainError);
  const PureStateFamily a({d}, {{0}, {1}}, {0.5, 0.5});
  const auto t = tensor(a, a);
  CHECK(t.size() == 4);
  CHECK(oracle::max_abs(t.dense().matrix() - 0.25 * Matrix::Identity(4, 4)) < 1e-15);
  const auto m = mix({{0.5, a}, {0.5, PureStateFamily({d}, {{0}}, {1.0})}});
  CHECK(m.total_weight() == doctest::Approx(1.0));
  CHECK(m.dense().matrix()(0, 0).real() == doctest::Approx(0.75));
  Limits tight;
  tight.gram_cap = 3;
  CHECK_THROWS_AS(mixture_spectrum(t, tight), CapacityError);
}

TEST_CASE("block-diagonal norms match the assembled matrix") {
  oracle::SplitMix gen{8};
  std::vector<Matrix> blocks{gen.hermitian(3), gen.hermitian(1), gen.hermitian(4)};
  Matrix full = Matrix::Zero(8, 8);
  full.block(0, 0, 3, 3) = blocks[0];
  full.block(3, 3, 1, 1) = blocks[1];
  full.block(4, 4, 4, 4) = blocks[2];
  const BlockDiagonal bd(blocks);
  CHECK(bd.dim() == 8);
  CHECK(bd.trace() == doctest::Approx(full.trace().real()));
  CHECK(trace_norm(bd) == doctest::Approx(oracle::trace_norm(full)));
  const Matrix shifted = full - 0.3 * Matrix::Identity(8, 8);
  CHECK(shifted_trace_norm(bd, 0.3) == doctest::Approx(oracle::trace_norm(shifted)));
  CHECK(numeric_rank(bd) == static_cast<std::size_t>(oracle::rank(full)));
}
