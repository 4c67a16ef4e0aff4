#include <gtest/gtest.h>

#include "idcubic/certifier.hpp"
#include "idcubic/forge.hpp"
#include "idcubic/probe.hpp"
#include "test_support.hpp"

using namespace idc;
using idc::testing::RatGen;

namespace {

RatVector rv(std::initializer_list<std::int64_t> xs) {
  RatVector v;
  for (auto x : xs) v.push_back(Rational(x));
  return v;
}

RatMatrix forged() { return forge_3x3({Rational(1), Rational(0), Rational(1), Rational(2), std::nullopt}); }

RatMatrix block_diag(const RatMatrix& a, const RatMatrix& b) {
  RatMatrix r(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) r(a.rows() + i, a.cols() + j) = b(i, j);
  return r;
}

// P (N3 + 0) P^{-1} with P e1 = 1: corank 2, kernel contains 1.
RatMatrix corank2_nonproper(std::mt19937_64& rng) {
  RatMatrix j(4, 4);
  j(0, 1) = 1;
  j(1, 2) = 1;
  std::uniform_int_distribution<std::int64_t> dist(-2, 2);
  while (true) {
    RatMatrix p(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
      p(i, 0) = 1;
      for (std::size_t c = 1; c < 4; ++c) p(i, c) = dist(rng);
    }
    if (auto inv = inverse(p)) return p * j * *inv;
  }
}

// Mixed corpus for the property tests.
RatMatrix corpus_matrix(RatGen& g, int t) {
  auto& rng = g.engine();
  const std::size_t m = static_cast<std::size_t>(g.integer(3, 4));
  switch (t % 6) {
    case 0: return sample_ones_kernel(m, rng, 3);
    case 1: return sample_ones_kernel_nonproper(m, rng);
    case 2: return sample_ones_kernel_borderline(m, rng);
    case 3: return random_family_member(rng).second;
    case 4: return g.low_rank(m, m - 1, 2);
    default: return g.sparse_matrix(m, 0.45, 2);
  }
}

}  // namespace

TEST(NecessaryCondition, Examples) {
  EXPECT_EQ(necessary_condition_search(RatMatrix::identity(3)).status, NecessaryStatus::NoneExact);
  EXPECT_FALSE(necessary_condition_part1(RatMatrix::identity(3)));
  EXPECT_EQ(necessary_condition_search(RatMatrix(3, 3)).status, NecessaryStatus::NoneExact);

  const RatMatrix s = shift_5x5();
  const auto res = necessary_condition_search(s);
  EXPECT_EQ(res.status, NecessaryStatus::Found);
  ASSERT_TRUE(res.x);
  EXPECT_EQ(*res.x, rv({0, 0, 1, 1, 0}));
  EXPECT_EQ(s * *res.x, rv({1, 1, 0, 0, 0}));
}

TEST(NecessaryCondition, FoundVectorsSatisfyTheCondition) {
  RatGen g(61);
  int found = 0;
  for (int t = 0; t < 300; ++t) {
    const RatMatrix a = g.sparse_matrix(static_cast<std::size_t>(g.integer(2, 5)), 0.4, 2);
    const auto res = necessary_condition_search(a);
    if (res.status != NecessaryStatus::Found) continue;
    ++found;
    ASSERT_TRUE(res.x);
    const RatVector y = a * *res.x;
    ASSERT_FALSE(is_zero_vector(y));
    ASSERT_TRUE(is_zero_vector(a * hpow(y, 3)));
    ASSERT_TRUE(image_basis(a.transpose()).contains(*res.x));
  }
  EXPECT_GT(found, 10);
}

TEST(NecessaryCondition, RankOneIsDecidedExactly) {
  // V = span{b}: the condition reduces to A b^3 = 0
  RatGen g(62);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = static_cast<std::size_t>(g.integer(2, 4));
    const RatMatrix a = g.low_rank(m, 1, 3);
    if (rank(a) != 1) continue;
    const RatVector b = image_basis(a).basis().front();
    const auto res = necessary_condition_search(a);
    ASSERT_TRUE(res.complete);
    ASSERT_EQ(res.status == NecessaryStatus::Found, is_zero_vector(a * hpow(b, 3)));
  }
}

TEST(NecessaryCondition, CoefficientOrder) {
  const auto c = detail::coefficient_vectors(2, 1, 1000);
  ASSERT_EQ(c.size(), 8u);
  EXPECT_EQ(c[0], (std::vector<std::int64_t>{0, 1}));
  EXPECT_EQ(c[1], (std::vector<std::int64_t>{0, -1}));
  EXPECT_EQ(c[2], (std::vector<std::int64_t>{1, 0}));
  EXPECT_EQ(c[4], (std::vector<std::int64_t>{1, 1}));
  // beyond the cap only pairs remain
  EXPECT_EQ(detail::coefficient_vectors(12, 1, 1000).size(), 2u * 12 + 4u * 66);
}

TEST(Thm1, Examples) {
  RatGen g(63);
  for (int t = 0; t < 30; ++t) {
    RatMatrix b = g.sparse_matrix(4, 0.5, 3);
    const RatMatrix sym = b + b.transpose();
    const auto c = check_thm1(sym);
    EXPECT_EQ(c.verdict, Verdict::Proper);
    EXPECT_EQ(c.reason, "Thm1.1");
    // soundness of the reason, checked independently
    for (const auto& k : c.evidence.bases.at("Ker(A)")) {
      ASSERT_TRUE(is_zero_vector(sym * k));
      ASSERT_TRUE(is_zero_vector(sym * (sym.transpose() * k)));
    }
  }
  // outer product u v^T with u, v not parallel
  RatMatrix outer(3, 3);
  const RatVector u = rv({1, 2, 0}), v = rv({0, 1, 1});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) outer(i, j) = u[i] * v[j];
  EXPECT_EQ(check_thm1(outer).reason, "Thm1.2");
  EXPECT_EQ(check_thm1(shift_5x5()).reason, "Thm1.3");
  EXPECT_EQ(check_thm1(forged()).verdict, Verdict::Undecided);
  std::mt19937_64 rng(64);
  const auto border = check_thm1(sample_ones_kernel_borderline(4, rng));
  EXPECT_EQ(border.verdict, Verdict::Proper);
  ASSERT_EQ(border.audit.size(), 5u);
  EXPECT_EQ(border.audit.back().check.substr(0, 6), "Thm1.6");
  EXPECT_EQ(border.audit.back().outcome, "true");
}

TEST(Thm1, AuditRecordsEveryCondition) {
  const auto c = check_thm1(RatMatrix::identity(2));
  ASSERT_EQ(c.audit.size(), 5u);
  EXPECT_EQ(c.audit[0].outcome, "true");
  EXPECT_EQ(c.audit[3].outcome, "skipped");
  Thm1Options opt;
  opt.zeta = rv({1, 1});
  EXPECT_EQ(check_thm1(RatMatrix::identity(2), opt).audit[3].outcome, "inconclusive");
  EXPECT_EQ(check_thm1(make_rat_matrix({{1, 0}, {0, -1}}), opt).audit[3].outcome, "false");
}

TEST(ZetaFalsifier, Examples) {
  const RatVector one = rv({1, 1});
  EXPECT_FALSE(zeta_falsifier(RatMatrix::identity(2), one));
  const auto neg = zeta_falsifier(Rational(-1) * RatMatrix::identity(2), one);
  ASSERT_TRUE(neg);
  const auto diag = zeta_falsifier(make_rat_matrix({{1, 0}, {0, -1}}), one, 2000, 7);
  ASSERT_TRUE(diag);
  EXPECT_LT(std::pow((*diag)[0], 4) - std::pow((*diag)[1], 4), 0);
  EXPECT_THROW(zeta_falsifier(RatMatrix::identity(2), rv({1, 0})), DomainError);
}

TEST(Thm2Direction, Examples) {
  const RatMatrix f = forged();
  const Subspace v = image_basis(f * f.transpose());
  const auto ok = check_thm2_direction(f, v, rv({1, 1, 1}));
  ASSERT_TRUE(ok.holds);
  EXPECT_EQ(f * *ok.u + rv({1, 1, 1}), rv({0, 0, 0}));
  EXPECT_FALSE(check_thm2_direction(RatMatrix::identity(3), v, rv({1, 1, 1})).holds);
  const RatMatrix z(3, 3);
  EXPECT_FALSE(check_thm2_direction(z, Subspace::full(3), rv({1, 2, 3})).holds);
  EXPECT_THROW(check_thm2_direction(f, v, rv({1, 0, 1})), DomainError);
}

TEST(Corank1, FastPathAgreesWithChain) {
  std::mt19937_64 rng(65);
  int proper = 0, nonproper = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 3 + static_cast<std::size_t>(t % 3);
    const RatMatrix a = t % 3 == 0   ? sample_ones_kernel(m, rng, 3)
                        : t % 3 == 1 ? sample_ones_kernel_nonproper(m, rng)
                                     : sample_ones_kernel_borderline(m, rng);
    const auto fast = corank1_fast_path(a);
    ASSERT_TRUE(fast);
    const Subspace v = image_basis(a * a.transpose());
    const auto chain = condition_chain(a, make_direction(ones<Rational>(m)), v, ConditionMode::S);
    ASSERT_EQ(*fast, !chain.satisfied);
    const auto c = corank1_decide(a);
    ASSERT_EQ(c.verdict, *fast ? Verdict::Proper : Verdict::NonProper);
    (*fast ? proper : nonproper)++;
  }
  EXPECT_GT(proper, 20);
  EXPECT_GT(nonproper, 20);
}

TEST(Corank1, IrrationalCubeRoots) {
  // kernel (1, 1, 2): x_inf = (1, 1, 2^{1/3}) lies in Im(A) but A(Im(A) * x_inf^2) = <1>
  const RatMatrix a = make_rat_matrix({{1, 1, -1}, {1, 1, -1}, {2, 0, -1}});
  ASSERT_EQ(rank(a), 2u);
  const auto c = corank1_decide(a);
  EXPECT_EQ(c.verdict, Verdict::Proper);
  EXPECT_FALSE(c.numeric_only);
  EXPECT_FALSE(verify_certificate(a, c));
  EXPECT_EQ(probe_mu(a).verdict_hint, ProbeHint::GrowthObserved);

  // kernel (1, 2, 0) with Im(A) = {x : x1 = x2}: x_inf not in Im(A)
  const RatMatrix b = make_rat_matrix({{2, -1, 1}, {2, -1, 1}, {0, 0, 1}});
  const auto d = corank1_decide(b);
  EXPECT_EQ(d.verdict, Verdict::Proper);
  EXPECT_FALSE(d.numeric_only);

  // kernel (2, 3, 0): the next target sits on e3, which Im(A) = {x3 = 0} misses
  const RatMatrix e = make_rat_matrix({{0, 0, 9}, {-3, 2, -1}, {0, 0, 0}});
  EXPECT_EQ(corank1_decide(e).verdict, Verdict::Proper);

  // kernel (1, 1, 2, 2), non-proper: exact decision, numeric witness
  RatMatrix f2 = make_rat_matrix({{2, 1, -2, 0}, {2, 1, 2, 0}, {-1, 0, -2, 0}, {-1, 0, -2, 0}});
  const RatVector last = {Rational(1, 2), Rational(-7, 2), Rational(5, 2), Rational(5, 2)};
  for (std::size_t i = 0; i < 4; ++i) f2(i, 3) = last[i];
  ASSERT_TRUE(is_zero_vector(f2 * make_rat_vector({1, 1, 2, 2})));
  const auto n = corank1_decide(f2);
  EXPECT_EQ(n.verdict, Verdict::NonProper);
  EXPECT_TRUE(n.numeric_only);
  EXPECT_FALSE(verify_certificate(f2, n));
  EXPECT_EQ(probe_mu(f2).verdict_hint, ProbeHint::BoundedObserved);
  EXPECT_THROW(corank1_decide(RatMatrix::identity(2)), DomainError);
}

TEST(Corank1, ExactIrrationalTestsMatchNumericChain) {
  // V = span{(1,1,0,0), (0,0,1,1), z}, A = [V] C with C (1,1,2,2) = 0
  std::mt19937_64 rng(74);
  std::uniform_int_distribution<int> dist(-2, 2);
  const RatVector g = make_rat_vector({1, 1, 2, 2});
  int proper = 0, nonproper = 0;
  for (int t = 0; t < 400; ++t) {
    RatMatrix vb(4, 3), cm(3, 4);
    vb(0, 0) = vb(1, 0) = vb(2, 1) = vb(3, 1) = 1;
    for (std::size_t i = 0; i < 4; ++i) vb(i, 2) = dist(rng);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) cm(i, j) = dist(rng);
      cm(i, 3) = -(cm(i, 0) + cm(i, 1) + 2 * cm(i, 2)) / 2;
    }
    const RatMatrix a = vb * cm;
    if (rank(a) != 3) continue;
    const auto c = corank1_decide(a);
    ASSERT_NE(c.verdict, Verdict::Undecided);
    const RealSubspace vr = to_real(image_basis(a * a.transpose()));
    const auto num = run_chain<Real>(to_real(a), real_cube_root_direction(g), &vr, ConditionMode::S);
    ASSERT_EQ(c.verdict == Verdict::NonProper, num.satisfied) << "t=" << t;
    (c.verdict == Verdict::Proper ? proper : nonproper)++;
  }
  EXPECT_GT(proper, 10);
  EXPECT_GT(nonproper, 2);
}

TEST(Certify, Examples) {
  const auto id = certify(RatMatrix::identity(3));
  EXPECT_EQ(id.verdict, Verdict::Proper);
  EXPECT_EQ(id.reason, "Thm1.1");

  const RatMatrix s = shift_5x5();
  const auto sh = certify(s);
  EXPECT_EQ(sh.verdict, Verdict::Proper);
  EXPECT_EQ(sh.reason, "Thm1.3");
  EXPECT_EQ(necessary_condition_search(s).status, NecessaryStatus::Found);

  const RatMatrix f = forged();
  const auto fc = certify(f);
  EXPECT_EQ(fc.verdict, Verdict::NonProper);
  EXPECT_TRUE(fc.reason == "Cor4" || fc.reason == "Cor3");
  ASSERT_TRUE(fc.evidence.recipe);
  EXPECT_FALSE(verify_certificate(f, fc));
}

TEST(Certify, HigherCorank) {
  std::mt19937_64 rng(66);
  for (int t = 0; t < 10; ++t) {
    const RatMatrix a = corank2_nonproper(rng);
    ASSERT_EQ(rank(a), 2u);
    const auto c = certify(a);
    ASSERT_EQ(c.verdict, Verdict::NonProper);
    ASSERT_EQ(c.reason, "Cor3");
    ASSERT_FALSE(verify_certificate(a, c));
  }
  // forged block plus a zero block: x_inf = (1,1,1,0,0) needs the chain
  const RatMatrix a = block_diag(forged(), RatMatrix(2, 2));
  const auto c = certify(a);
  EXPECT_EQ(c.verdict, Verdict::NonProper);
  EXPECT_EQ(c.reason, "ThmNS3");
  EXPECT_FALSE(verify_certificate(a, c));
}

TEST(Certify, VerifyRejectsTamperedCertificates) {
  const RatMatrix f = forged();
  auto c = certify(f);
  ASSERT_TRUE(c.evidence.recipe);
  auto& r = *c.evidence.recipe;
  if (r.stages.empty()) r.u[0] += 1;
  else r.stages[0].u[0] += 1;
  EXPECT_TRUE(verify_certificate(f, c));
  auto p = decided(Verdict::Proper, "Thm1.3");
  EXPECT_TRUE(verify_certificate(f, p));
  p.reason = "made-up";
  EXPECT_TRUE(verify_certificate(f, p));
  EXPECT_TRUE(verify_certificate(f, decided(Verdict::NonProper, "Cor3")));
}

TEST(Certify, ConjugationInvariance) {
  RatGen g(67);
  int decisive_pairs = 0;
  for (int t = 0; t < 120; ++t) {
    const RatMatrix a = corpus_matrix(g, t);
    const RatVector d = g.nonzero_entries(a.rows(), 3, 2);
    const RatMatrix b = RatMatrix::diagonal(d) * a * RatMatrix::diagonal(hinv_pow(d, 3));
    const auto ca = certify(a), cb = certify(b);
    if (!ca.decisive() || !cb.decisive()) continue;
    ++decisive_pairs;
    ASSERT_EQ(ca.verdict, cb.verdict) << "t=" << t << " " << ca.reason << " vs " << cb.reason;
  }
  EXPECT_GT(decisive_pairs, 80);
}

TEST(Certify, SoundnessOnCorpus) {
  RatGen g(68);
  for (int t = 0; t < 120; ++t) {
    const RatMatrix a = corpus_matrix(g, t);
    const auto c = certify(a);
    ASSERT_FALSE(verify_certificate(a, c)) << "t=" << t << " " << c.reason;
    if (c.verdict == Verdict::Proper) ASSERT_FALSE(c.numeric_only);
  }
}

TEST(CertifyPower, Dispatch) {
  const RatMatrix f = forged();
  EXPECT_EQ(certify_power(f, 1).reason, "k1");
  EXPECT_EQ(certify_power(f, 3).verdict, Verdict::NonProper);
  const auto c5 = certify_power(f, 5);
  EXPECT_EQ(c5.verdict, Verdict::NonProper);
  ASSERT_TRUE(c5.evidence.recipe);
  EXPECT_EQ(c5.evidence.recipe->k, 5u);
  EXPECT_FALSE(verify_certificate(f, c5));
  EXPECT_EQ(certify_power(RatMatrix::identity(3), 5).verdict, Verdict::Undecided);
  EXPECT_THROW(certify_power(f, 0), DomainError);
}
