#include <doctest.h>

#include <cmath>

#include "cosetlab/errors.hpp"
#include "cosetlab/qes.hpp"
#include "oracle.hpp"

using namespace cosetlab;

TEST_CASE("parameters") {
  CHECK_NOTHROW(QesParams{4, 2}.validate());
  CHECK_THROWS_AS((QesParams{4, 3}.validate()), UsageError);
  CHECK_THROWS_AS((QesParams{4, 1}.validate()), UsageError);
  CHECK_THROWS_AS((QesParams{4, 8}.validate()), UsageError);
  CHECK_THROWS_AS(QesScheme(QesParams{10, 2}), CapacityError);
}

TEST_CASE("encryption round trip for every key and message") {
  for (const QesParams params : {QesParams{4, 2}, QesParams{4, 4}}) {
    const QesScheme scheme(params);
    CHECK(scheme.keys().size() == key_count(params.n, params.m));
    for (const auto& h : scheme.keys()) {
      const POVM p = scheme.decryption_povm(h);
      CHECK(p.completeness_defect() < 1e-12);
      for (int s = 0; s < params.m; ++s) {
        const auto d = scheme.decrypt(h, scheme.encrypt(h, s));
        CHECK(d.message == s);
        CHECK(d.distribution.probability(std::to_string(s)) == doctest::Approx(1.0).epsilon(1e-12));
        for (int t = 0; t < params.m; ++t) {
          if (t == s) continue;
          const Matrix ps = p.element(std::to_string(s)).matrix(), pt = p.element(std::to_string(t)).matrix();
          CHECK(oracle::max_abs(ps * pt) < 1e-12);
        }
      }
      CHECK(scheme.encryption_key_state(h).size() == static_cast<std::size_t>(params.m));
    }
  }
}

TEST_CASE("the m sectors of one key cover the whole space") {
  const QesScheme scheme(QesParams{4, 2});
  const auto& keys = scheme.keys();
  const auto d = scheme.decrypt(keys[0], scheme.encrypt(keys[1], 0));
  CHECK(d.distribution.probability("residual") < 1e-12);
  CHECK(d.distribution.probability("0") + d.distribution.probability("1") == doctest::Approx(1.0));
}

TEST_CASE("key generation is seeded and uniform") {
  const QesScheme scheme(QesParams{4, 2});
  CHECK(scheme.keygen(5) == scheme.keygen(5));
  std::vector<int> hits(3, 0);
  for (std::uint64_t seed = 0; seed < 3000; ++seed) {
    const auto k = scheme.keygen(seed);
    for (std::size_t i = 0; i < 3; ++i) hits[i] += scheme.keys()[i] == k ? 1 : 0;
  }
  for (int h : hits) CHECK(h == doctest::Approx(1000).epsilon(0.1));
}

TEST_CASE("bound formula") {
  const auto b0 = qes_bound({4, 2}, 0);
  CHECK(b0.key_count == 3);
  CHECK(b0.bound == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK_FALSE(b0.vacuous);
  const auto b1 = qes_bound({4, 2}, 1);
  CHECK(b1.bound == doctest::Approx(std::sqrt(8.0 / 3.0)));
  CHECK_FALSE(b1.vacuous);  // sqrt(8/3) ~ 1.63 < 2
  CHECK(qes_bound({4, 2}, 2).vacuous);
  CHECK(qes_bound({6, 2}, 0).key_count == 15);
  CHECK(qes_bound({6, 2}, 0).stirling_keys > 0.0);
}

TEST_CASE("zero-copy view against an independent construction") {
  const QesScheme scheme(QesParams{4, 2});
  const auto& g = *scheme.group();
  for (int s = 0; s < 2; ++s) {
    Matrix x = -Matrix::Identity(24, 24) / 24.0;
    for (const auto& h : scheme.keys()) x += oracle::phase_state(g, 2, g.from_permutation(h), s) / 3.0;
    const double ref = oracle::trace_norm(x);
    const auto r = indistinguishability_norms(scheme, 0);
    CHECK(r.l[static_cast<std::size_t>(s)] == doctest::Approx(ref).epsilon(1e-10));
  }
  const auto r = indistinguishability_norms(scheme, 0);
  CHECK(r.l0_cross_check);
  CHECK(*r.l0_cross_check == doctest::Approx(r.l0()).epsilon(1e-9));
  CHECK(r.l_path == "dense");
  CHECK(r.cross_check_path == "gram");
  CHECK(r.symmetry_defect < 1e-12);
  CHECK_FALSE(r.has_violation());
  CHECK(r.l0() <= r.bound.bound);
  // pairwise norms are symmetric with zero diagonal
  CHECK(r.pairwise[0][0] == 0.0);
  CHECK(r.pairwise[0][1] == doctest::Approx(r.pairwise[1][0]));
}

TEST_CASE("one-copy view: block and Gram paths agree") {
  const QesScheme scheme(QesParams{4, 2});
  const auto r = indistinguishability_norms(scheme, 1);
  CHECK(r.l_path == "block");
  CHECK(r.pairwise_path == "block");
  REQUIRE(r.l0_cross_check);
  CHECK(r.cross_check_path == "gram");
  CHECK(*r.l0_cross_check == doctest::Approx(r.l0()).epsilon(1e-9));
  CHECK(r.symmetry_defect < 1e-6);
  CHECK_FALSE(r.has_violation());
  for (double l : r.l) CHECK(l <= r.bound.bound + 1e-8);
}
