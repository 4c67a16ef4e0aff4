#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "idcubic/hadamard.hpp"
#include "idcubic/linalg.hpp"
#include "test_support.hpp"

using namespace idc;
using idc::testing::RatGen;

namespace {
RatVector rv(std::initializer_list<std::int64_t> xs) { return make_rat_vector(xs); }

RatMatrix shift5() {
  return make_rat_matrix({{0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}});
}
}  // namespace

TEST(Hadamard, Product) {
  EXPECT_EQ(hprod(rv({1, 2, 3}), rv({4, 5, 6})), rv({4, 10, 18}));
  RatGen g(1);
  const auto x = g.vector(4);
  EXPECT_EQ(hprod(x, ones<Rational>(4)), x);
  EXPECT_EQ(hprod(x, RatVector(4, Rational(0))), RatVector(4, Rational(0)));
  EXPECT_THROW(hprod(rv({1, 2}), rv({1})), DimensionError);
}

TEST(Hadamard, Powers) {
  EXPECT_EQ(hpow(rv({1, -2}), 3), rv({1, -8}));
  EXPECT_EQ(hpow(rv({5, -7}), 1), rv({5, -7}));
  EXPECT_EQ(hpow(rv({2, 3}), 2), rv({4, 9}));
}

TEST(Hadamard, OddRoots) {
  EXPECT_EQ(hroot_odd(rv({8, -27}), 3), rv({2, -3}));
  EXPECT_EQ(hroot_odd(rv({0, 1}), 3), rv({0, 1}));
  EXPECT_EQ(hroot_odd(RatVector{Rational(1, 8), Rational(-1)}, 3), (RatVector{Rational(1, 2), Rational(-1)}));
  EXPECT_THROW(hroot_odd(rv({2}), 3), DomainError);
  EXPECT_THROW(hroot_odd(rv({4}), 2), DomainError);
  const auto f = hroot_odd(FloatVector{2.0, -2.0}, 3);
  EXPECT_NEAR(f[0], std::cbrt(2.0), 1e-15);
  EXPECT_NEAR(f[1], -std::cbrt(2.0), 1e-15);
}

TEST(Hadamard, InversePowers) {
  EXPECT_EQ(hinv_pow(rv({1, 2}), 1), (RatVector{Rational(1), Rational(1, 2)}));
  EXPECT_EQ(hinv_pow(rv({1, -2}), 2), (RatVector{Rational(1), Rational(1, 4)}));
  EXPECT_THROW(hinv_pow(rv({0, 1}), 1), DomainError);
}

TEST(Hadamard, RootOfPowerIsIdentity) {
  RatGen g(2);
  for (int t = 0; t < 200; ++t) {
    const auto x = g.vector(static_cast<std::size_t>(g.integer(1, 6)), 9, 7);
    for (unsigned k : {1u, 3u, 5u, 7u}) ASSERT_EQ(hroot_odd(hpow(x, k), k), x);
  }
}

TEST(Hadamard, ProductIsCommutativeAssociativeWithUnit) {
  RatGen g(3);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = static_cast<std::size_t>(g.integer(1, 6));
    const auto x = g.vector(m), y = g.vector(m), z = g.vector(m);
    ASSERT_EQ(hprod(x, y), hprod(y, x));
    ASSERT_EQ(hprod(hprod(x, y), z), hprod(x, hprod(y, z)));
    ASSERT_EQ(hprod(ones<Rational>(m), x), x);
  }
}

TEST(MapEvaluation, Examples) {
  const auto x = rv({3, -1, 2});
  EXPECT_EQ(eval_FA(RatMatrix(3, 3), x), x);
  EXPECT_EQ(eval_FA(make_rat_matrix({{1}}), rv({2}), 3), rv({10}));
  // The 5x5 shift: x = [0,0,1,1,0] gives Ax = [1,1,0,0,0].
  EXPECT_EQ(shift5() * rv({0, 0, 1, 1, 0}), rv({1, 1, 0, 0, 0}));
  EXPECT_EQ(eval_FA(shift5(), rv({0, 0, 1, 1, 0})), rv({1, 1, 1, 1, 0}));

  EXPECT_EQ(eval_FA_hat(RatMatrix(3, 3), x), x);
  EXPECT_EQ(eval_FA_hat(RatMatrix::identity(2), rv({1, 2}), 3), rv({2, 10}));
  EXPECT_EQ(eval_FA_hat(shift5(), rv({0, 0, 1, 0, 0})), rv({1, 0, 1, 0, 0}));
}

TEST(MapEvaluation, DiagonalConjugationEquivariance) {
  // F_{DAD^-3}(D^3 x) = D^3 F_A(x).
  RatGen g(4);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = static_cast<std::size_t>(g.integer(1, 5));
    const RatMatrix a = g.matrix(m);
    const RatVector d = g.nonzero_entries(m, 4, 3);
    const RatMatrix D = RatMatrix::diagonal(d);
    const RatMatrix Dinv3 = RatMatrix::diagonal(hinv_pow(d, 3));
    const RatMatrix b = D * a * Dinv3;
    const RatVector x = g.vector(m);
    ASSERT_EQ(eval_FA(b, hprod(hpow(d, 3), x)), hprod(hpow(d, 3), eval_FA(a, x)));
    // and the hat map is D-equivariant: F^_B(Dx) = D F^_A(x)
    ASSERT_EQ(eval_FA_hat(b, hprod(d, x)), D * eval_FA_hat(a, x));
  }
}

TEST(MapEvaluation, PermutationEquivariance) {
  RatGen g(5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = static_cast<std::size_t>(g.integer(1, 5));
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), g.engine());
    RatMatrix P(m, m);
    for (std::size_t i = 0; i < m; ++i) P(i, perm[i]) = 1;
    const RatMatrix a = g.matrix(m);
    const RatVector x = g.vector(m);
    ASSERT_EQ(eval_FA(P * a * P.transpose(), P * x), P * eval_FA(a, x));
  }
}
