#include <gtest/gtest.h>

#include "idcubic/keller.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace idc;
using idc::testing::RatGen;

namespace {

RatMatrix shift5() {
  return make_rat_matrix({{0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}});
}

// I + k diag((Ax)^{k-1}) A assembled by explicit matrix products.
RatMatrix jacobian_oracle(const RatMatrix& a, const RatVector& x, unsigned k) {
  const RatVector ax = a * x;
  RatVector d(ax.size());
  for (std::size_t i = 0; i < ax.size(); ++i) {
    Rational p = k;
    for (unsigned e = 1; e < k; ++e) p *= ax[i];
    d[i] = p;
  }
  return RatMatrix::identity(a.rows()) + RatMatrix::diagonal(d) * a;
}

RatMatrix strictly_upper(RatGen& g, std::size_t m) {
  RatMatrix a(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) a(i, j) = g.rational(4, 3);
  return a;
}

MultiPoly x_(std::size_t n, std::size_t i) { return MultiPoly::variable(n, i); }
MultiPoly c_(std::size_t n, std::int64_t c) { return MultiPoly::constant(n, Rational(c)); }

}  // namespace

TEST(MultiPoly, ArithmeticAndPrinting) {
  const auto x = x_(2, 0), y = x_(2, 1);
  const auto p = (x + y) * (x - y);
  EXPECT_EQ(p, x.pow(2) - y.pow(2));
  EXPECT_EQ(p.degree(), 2u);
  EXPECT_EQ(p.evaluate({Rational(3), Rational(2)}), 5);
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ((c_(2, 1) + Rational(3) * x.pow(2)).to_string(), "3*x1^2 + 1");
  EXPECT_EQ((x - Rational(1, 2) * y).to_string(), "x1 - 1/2*x2");
}

TEST(JacobianDet, Examples) {
  EXPECT_EQ(jacobian_det(RatMatrix(3, 3)), c_(3, 1));
  for (std::int64_t a : {-2, 1, 3}) {
    // d/dx (x + (ax)^3) = 1 + 3 a^3 x^2
    const auto expected = c_(1, 1) + Rational(3 * a * a * a) * x_(1, 0).pow(2);
    EXPECT_EQ(jacobian_det(make_rat_matrix({{a}})), expected);
  }
  EXPECT_EQ(jacobian_det(shift5()), c_(5, 1));
  const auto id2 = jacobian_det(RatMatrix::identity(2));
  EXPECT_EQ(id2, (c_(2, 1) + Rational(3) * x_(2, 0).pow(2)) * (c_(2, 1) + Rational(3) * x_(2, 1).pow(2)));
}

TEST(JacobianDet, AgreesWithCofactorAtRandomPoints) {
  RatGen g(21);
  for (int t = 0; t < 30; ++t) {
    const std::size_t m = static_cast<std::size_t>(g.integer(1, t < 25 ? 4 : 5));
    const unsigned k = t % 3 == 0 ? 2u : 3u;
    const RatMatrix a = t % 2 ? g.matrix(m, 3, 2) : g.sparse_matrix(m, 0.5, 3);
    const MultiPoly det = jacobian_det(a, k);
    for (int p = 0; p < 20; ++p) {
      const RatVector x = g.vector(m, 4, 3);
      ASSERT_EQ(det.evaluate(x), idc::testing::cofactor_det(jacobian_oracle(a, x, k)));
    }
  }
}

TEST(JacobianDet, RefusesAboveBound) {
  EXPECT_THROW(jacobian_det(RatMatrix(7, 7)), DomainError);
  EXPECT_NO_THROW(jacobian_det(RatMatrix(7, 7), 3, {7, 1000}));
}

TEST(Druzkowski, Examples) {
  const auto id = is_druzkowski(RatMatrix::identity(2));
  EXPECT_FALSE(id.druzkowski);
  EXPECT_EQ(id.mode, "exact");
  const auto sh = is_druzkowski(shift5());
  EXPECT_TRUE(sh.druzkowski);
  EXPECT_EQ(sh.mode, "exact");
  EXPECT_TRUE(is_druzkowski(RatMatrix(4, 4)).druzkowski);
}

TEST(Druzkowski, RandomizedMode) {
  DruzkowskiOptions opt;
  opt.force_randomized = true;
  opt.seed = 5;
  const auto sh = is_druzkowski(shift5(), opt);
  EXPECT_TRUE(sh.druzkowski);
  EXPECT_EQ(sh.mode, "randomized");
  EXPECT_EQ(sh.trials, 64u);
  EXPECT_EQ(sh.summary(), "probably yes, 64 trials");

  const auto id = is_druzkowski(RatMatrix::identity(3), opt);
  EXPECT_FALSE(id.druzkowski);
  ASSERT_TRUE(id.failure_point.has_value());
  EXPECT_NE(idc::testing::cofactor_det(jacobian_oracle(RatMatrix::identity(3), *id.failure_point, 3)), 1);

  // Above the exact bound the randomized path is taken automatically.
  RatGen g(22);
  const auto big = is_druzkowski(strictly_upper(g, 8));
  EXPECT_EQ(big.mode, "randomized");
  EXPECT_TRUE(big.druzkowski);
}

TEST(Druzkowski, ConjugationInvariance) {
  RatGen g(23);
  for (int t = 0; t < 40; ++t) {
    const std::size_t m = static_cast<std::size_t>(g.integer(2, 4));
    const RatMatrix a = t % 2 ? strictly_upper(g, m) : g.sparse_matrix(m, 0.4, 2);
    const RatVector d = g.nonzero_entries(m, 3, 2);
    const RatMatrix b = RatMatrix::diagonal(d) * a * RatMatrix::diagonal(hinv_pow(d, 3));
    const bool da = is_druzkowski(a).druzkowski;
    ASSERT_EQ(is_druzkowski(b).druzkowski, da);
    if (t % 2) ASSERT_TRUE(da);
  }
}

namespace {

bool pattern_inequality_holds(const RatMatrix& a, const SignPattern& sp) {
  const std::size_t m = a.rows();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) {
          const Rational p = a(i, j) * a(k, l) * (sp.delta[i] * sp.delta[j] * sp.delta[k] * sp.delta[l]);
          if (p < 0) return false;
        }
  return true;
}

// Exhaustive search over delta in {+-1}^m.
bool pattern_exists_brute(const RatMatrix& a) {
  const std::size_t m = a.rows();
  for (std::size_t mask = 0; mask < (std::size_t(1) << m); ++mask) {
    SignPattern sp;
    for (std::size_t i = 0; i < m; ++i) sp.delta.push_back(mask >> i & 1 ? -1 : 1);
    if (pattern_inequality_holds(a, sp)) return true;
  }
  return false;
}

}  // namespace

TEST(SignPattern, Examples) {
  const auto pos = find_sign_pattern(make_rat_matrix({{1, 2}, {0, 3}}));
  ASSERT_TRUE(pos);
  EXPECT_EQ(pos->delta, (std::vector<int>{1, 1}));
  EXPECT_EQ(pos->global_sign, 1);
  const auto neg = find_sign_pattern(make_rat_matrix({{-1, 0}, {-2, -3}}));
  ASSERT_TRUE(neg);
  EXPECT_EQ(neg->delta, (std::vector<int>{1, 1}));
  EXPECT_EQ(neg->global_sign, -1);
  // positive diagonal but negative product cycle
  EXPECT_FALSE(find_sign_pattern(make_rat_matrix({{1, 1}, {-1, 1}})));
  EXPECT_TRUE(find_sign_pattern(RatMatrix(3, 3)));
}

TEST(SignPattern, RoundTripAndBruteForceAgreement) {
  RatGen g(24);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = static_cast<std::size_t>(g.integer(1, 5));
    RatMatrix b(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (g.coin(0.6)) b(i, j) = Rational(g.integer(1, 5), g.integer(1, 3));
    if (t % 2) b = Rational(-1) * b;
    RatVector dh(m);
    for (auto& v : dh) v = g.coin() ? 1 : -1;
    const RatMatrix a = RatMatrix::diagonal(dh) * b * RatMatrix::diagonal(dh);
    const auto sp = find_sign_pattern(a);
    ASSERT_TRUE(sp);
    ASSERT_TRUE(satisfies_sign_pattern(a, *sp));
    ASSERT_TRUE(pattern_inequality_holds(a, *sp));
  }
  for (int t = 0; t < 300; ++t) {
    const RatMatrix a = g.sparse_matrix(static_cast<std::size_t>(g.integer(1, 4)), 0.5, 2);
    const auto sp = find_sign_pattern(a);
    ASSERT_EQ(sp.has_value(), pattern_exists_brute(a));
    if (sp) ASSERT_TRUE(pattern_inequality_holds(a, *sp));
  }
}

TEST(Invertibility, Verdicts) {
  EXPECT_EQ(invertibility_verdict(shift5(), decided(Verdict::Proper, "Thm1.3")), Invertibility::Invertible);
  EXPECT_EQ(invertibility_verdict(RatMatrix::identity(2), decided(Verdict::NonProper, "Cor3")),
            Invertibility::NotInvertible);
  EXPECT_EQ(invertibility_verdict(RatMatrix::identity(2), Certificate{}), Invertibility::Undetermined);
  // Proper but not Druzkowski: only the user's assertion closes the gap.
  EXPECT_EQ(invertibility_verdict(RatMatrix::identity(2), decided(Verdict::Proper, "Thm1.1")),
            Invertibility::Undetermined);
  EXPECT_EQ(invertibility_verdict(RatMatrix::identity(2), decided(Verdict::Proper, "Thm1.1"), true),
            Invertibility::Invertible);
}
