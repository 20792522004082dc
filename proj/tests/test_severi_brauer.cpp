#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace pindex;

namespace {

constexpr int X1 = 0, X2 = 2, Y2 = 3, Y3 = 5;

ExteriorClass omega_prime() { return ExteriorClass::monomial(3, oracle::mask({X1, X2, Y2, Y3}), Rational(-1)); }

/// Σ_i C(e,i)/n^i · b^i h^{e-i} over i < dim, computed with the reference wedge.
SBClass gamma_oracle(const ProductRing& R, const ExteriorClass& b, std::uint64_t n, std::uint64_t e) {
  SBClass out(R.g(), e);
  for (std::uint64_t i = 0; i <= e && i < static_cast<std::uint64_t>(R.g()); ++i) {
    Rational c = ratio(binomial(e, i), power(n, i));
    out.add(e - i, oracle::power(b, static_cast<int>(i)) * c);
  }
  return out;
}

} // namespace

TEST(SeveriBrauer, ModuleOperations) {
  ProductRing R(2);
  SBClass a = SBClass::pullback(R.omega(1), 3, 1);
  SBClass b = SBClass::pullback(R.omega(1) * Rational(-1), 3, 1);
  EXPECT_TRUE((a + b).is_zero());
  EXPECT_EQ((a * Rational(2)).coefficient(1), R.omega(1) * Rational(2));
  EXPECT_THROW(SBClass::pullback(R.one(), 3, 4), InputError);
  SBClass h = SBClass::pullback(R.one(), 3, 1);
  EXPECT_EQ((h * h * h).coefficient(3), R.one());
  EXPECT_THROW(h * h * h * h, InputError);
  EXPECT_THROW(a + SBClass(2, 4), InputError);
}

TEST(SeveriBrauer, IntegralityIsCoefficientwise) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    ProductRing R(2);
    SBClass D(2, 3);
    bool expect_global = true, expect_local = true;
    for (std::uint64_t j = 0; j <= 3; ++j) {
      ExteriorClass a = oracle::random_class(rng, 2, 2, 2, 0.5) * oracle::random_rational(rng, 3, 4);
      D.add(j, a);
      expect_global = expect_global && is_integral(a, Locality::global());
      expect_local = expect_local && is_integral(a, Locality::local_at(2));
    }
    EXPECT_EQ(is_integral(D, Locality::global()), expect_global);
    EXPECT_EQ(is_integral(D, Locality::local_at(2)), expect_local);
  }
}

TEST(SeveriBrauer, LinearPower) {
  ProductRing R(2);
  ExteriorClass b = R.standard_b(1);
  SBClass p = linear_power(Rational(2), b, 3, 3);
  EXPECT_EQ(p.coefficient(3), R.one() * Rational(8));
  EXPECT_EQ(p.coefficient(2), b * Rational(12));
  EXPECT_TRUE(p.coefficient(1).is_zero()); // b² = 0 for t = 1
  SBClass z = linear_power(Rational(0), b, 1, 2);
  EXPECT_EQ(z.coefficient(0), b);
  EXPECT_TRUE(z.coefficient(1).is_zero());
}

TEST(SeveriBrauer, GammaExamples) {
  ProductRing R(3);
  BrauerScenario sc = BrauerScenario::standard(R, 2, 2);
  SBClass gam = gamma_class(sc, 8);
  EXPECT_EQ(gam, gamma_oracle(R, sc.b(), 2, 8));
  EXPECT_EQ(gam.coefficient(8), R.one());
  EXPECT_EQ(gam.coefficient(7), sc.b() * Rational(4));
  EXPECT_EQ(gam.coefficient(6), wedge(sc.b(), sc.b()) * Rational(7));
  EXPECT_EQ(gam.coeffs().size(), 3u);
}

TEST(SeveriBrauer, GammaTrivialCases) {
  ProductRing R(2);
  BrauerScenario one(R, R.standard_b(1), 1);
  SBClass g1 = gamma_class(one, 1);
  EXPECT_EQ(g1.coefficient(1), R.one());
  EXPECT_EQ(g1.coefficient(0), R.standard_b(1));
  BrauerScenario zero(ProductRing(3), ProductRing(3).zero(), 5);
  SBClass g0 = gamma_class(zero, 4);
  EXPECT_EQ(g0.coeffs().size(), 1u);
  EXPECT_EQ(g0.coefficient(4), ProductRing(3).one());
}

TEST(SeveriBrauer, GammaMatchesOracle) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    int g = 2 + trial % 3;
    std::uint64_t n = 2 + static_cast<std::uint64_t>(trial % 4), e = 1 + static_cast<std::uint64_t>(trial % 7);
    ProductRing R(g);
    ExteriorClass b = oracle::random_class(rng, g, 2, 3, 0.5);
    EXPECT_EQ(gamma_class(BrauerScenario(R, b, n), e), gamma_oracle(R, b, n, e)) << "trial " << trial;
  }
}

TEST(SeveriBrauer, DeltaExamples) {
  ProductRing R(3);
  BrauerScenario sc = BrauerScenario::standard(R, 2, 2);
  SBClass d3 = delta_class(sc, 3);
  SBClass expect3(3, 3);
  expect3.add(3, R.one() * Rational(2));
  expect3.add(2, sc.b() * Rational(3));
  expect3.add(1, omega_prime() * Rational(3));
  EXPECT_EQ(d3, expect3);

  SBClass d1 = delta_class(sc, 1);
  SBClass expect1(3, 1);
  expect1.add(1, R.one() * Rational(2));
  expect1.add(0, sc.b());
  EXPECT_EQ(d1, expect1);

  for (std::uint64_t n : {2, 3, 5}) {
    SBClass z = delta_class(BrauerScenario(R, R.zero(), n), 4);
    EXPECT_EQ(z.coeffs().size(), 1u);
    EXPECT_EQ(z.coefficient(4), R.one() * Rational(static_cast<unsigned long>(n)));
  }
}

TEST(SeveriBrauer, FibralDegree) {
  ProductRing R(3);
  BrauerScenario sc = BrauerScenario::standard(R, 2, 2);
  EXPECT_EQ(fibral_degree(delta_class(sc, 3), 6), 2);
  EXPECT_EQ(fibral_degree(gamma_class(sc, 5), 10), 1);
  SBClass side = SBClass::pullback(R.omega(1), 4, 3);
  EXPECT_EQ(fibral_degree(side, 8), 0);
  EXPECT_THROW(fibral_degree(delta_class(sc, 3), 4), InputError);
  SBClass wrong = SBClass::pullback(R.omega(1), 3, 3);
  EXPECT_THROW(fibral_degree(wrong, 6), InputError);
}

TEST(SeveriBrauer, DeltaIntegralWhenNDividesFactorial) {
  for (int g = 2; g <= 6; ++g)
    for (std::uint64_t n : {2, 3, 4, 6}) {
      if (!divides(n, factorial(static_cast<std::uint64_t>(g - 1)))) continue;
      BrauerScenario sc = BrauerScenario::standard(ProductRing(g), g - 1, n);
      for (std::uint64_t r : {static_cast<std::uint64_t>(g), static_cast<std::uint64_t>(g + 3)}) {
        SBClass d = delta_class(sc, r);
        EXPECT_TRUE(is_integral(d, Locality::global())) << g << "," << n << "," << r;
        EXPECT_EQ(fibral_degree(d, 2 * r), Rational(power(n, static_cast<std::uint64_t>(g - 2)))) << g << "," << n;
      }
    }
}

TEST(SeveriBrauer, DeltaNotIntegralWithoutHypothesis) {
  // 3 ∤ 2!: the b² term carries 28/3
  BrauerScenario sc = BrauerScenario::standard(ProductRing(3), 2, 3);
  EXPECT_FALSE(is_integral(delta_class(sc, 8), Locality::global()));
}

TEST(SeveriBrauer, RoundTripExamples) {
  BrauerScenario sc = BrauerScenario::standard(ProductRing(3), 2, 2);
  RoundTrip a = integrality_and_witness_roundtrip(sc, 4, 4);
  ASSERT_TRUE(a.gamma.has_value());
  EXPECT_TRUE(a.verdict.solvable());
  EXPECT_EQ(*a.gamma, linear_power(Rational(1), sc.B(), 4, 4));
  EXPECT_TRUE(is_integral(*a.gamma, Locality::global()));

  RoundTrip b = integrality_and_witness_roundtrip(sc, 2, 3);
  EXPECT_FALSE(b.gamma.has_value());
  ASSERT_TRUE(b.verdict.obstructed());
  EXPECT_TRUE(verify_verdict(b.system, b.verdict));

  BrauerScenario one(ProductRing(3), ProductRing(3).standard_b(2), 1);
  for (std::uint64_t e = 1; e <= 4; ++e) EXPECT_TRUE(integrality_and_witness_roundtrip(one, e, e).gamma.has_value());
  EXPECT_THROW(integrality_and_witness_roundtrip(sc, 4, 3), InputError);
}

TEST(SeveriBrauer, RandomRoundTrips) {
  std::mt19937_64 rng(77);
  int solvable = 0;
  for (int trial = 0; trial < 30; ++trial) {
    int g = 2 + trial % 3;
    std::uint64_t n = 2 + static_cast<std::uint64_t>(trial % 3), e = 1 + static_cast<std::uint64_t>(trial % 9);
    BrauerScenario sc(ProductRing(g), oracle::random_class(rng, g, 2, 2, 0.5), n);
    RoundTrip rt = integrality_and_witness_roundtrip(sc, e, e + 1);
    EXPECT_EQ(rt.gamma.has_value(), rt.verdict.solvable());
    solvable += rt.verdict.solvable();
  }
  EXPECT_GT(solvable, 0);
}

TEST(SeveriBrauer, AlgebraicityIdentity) {
  EXPECT_TRUE(algebraicity_identity(BrauerScenario::standard(ProductRing(3), 2, 2), 8));
  EXPECT_TRUE(algebraicity_identity(BrauerScenario(ProductRing(3), ProductRing(3).zero(), 3), 5));
  std::mt19937_64 rng(5);
  for (int k = 0; k < 5; ++k) {
    BrauerScenario sc(ProductRing(2), oracle::random_class(rng, 2, 2, 4), 3);
    EXPECT_TRUE(algebraicity_identity(sc, 3 * vanishing_degree(2, 3).lcm_degree.get_ui()));
  }
  for (int g = 2; g <= 4; ++g)
    for (std::uint64_t n = 2; n <= 4; ++n) {
      BrauerScenario sc(ProductRing(g), oracle::random_class(rng, g, 2, 3, 0.5), n);
      EXPECT_TRUE(algebraicity_identity(sc, vanishing_degree(g, n).lcm_degree.get_ui()));
    }
}

TEST(SeveriBrauer, HodgeIndex) {
  ProductRing R(3);
  BrauerScenario sc = BrauerScenario::standard(R, 2, 2);
  EXPECT_EQ(hodge_index_wrt_P(sc, 3), 2);
  EXPECT_EQ(hodge_index_wrt_P(BrauerScenario(R, R.zero(), 2), 3), 1);
  EXPECT_THROW(hodge_index_wrt_P(BrauerScenario::standard(ProductRing(3, Locality::local_at(2)), 2, 2), 3),
               InputError);
}

TEST(SeveriBrauer, HodgeIndexDividesUpperBound) {
  for (int g = 2; g <= 4; ++g)
    for (int t = 1; t <= g - 1; ++t)
      for (std::uint64_t n : {2, 3}) {
        BrauerScenario sc = BrauerScenario::standard(ProductRing(g), t, n);
        std::uint64_t r = to_u64(power(n, static_cast<std::uint64_t>(g - 1))) - 1;
        Integer idx = hodge_index_wrt_P(sc, r);
        Integer bound = power(n, static_cast<std::uint64_t>(t));
        EXPECT_TRUE(mpz_divisible_p(bound.get_mpz_t(), idx.get_mpz_t())) << g << "," << t << "," << n;
        // every degree below the generator is infeasible
        for (std::uint64_t e = 1; e < idx.get_ui(); ++e)
          EXPECT_TRUE(decide(build_q_system(sc, r, e)).obstructed()) << g << "," << t << "," << n << " e=" << e;
      }
}

TEST(SeveriBrauer, TateIndexAgainstBruteForce) {
  BrauerScenario sc = BrauerScenario::standard(ProductRing(4, Locality::local_at(3)), 3, 3);
  Integer idx = tate_index_wrt_P(sc, 26, 3);
  EXPECT_TRUE(idx == 1 || idx == 3 || idx == 9);
  Integer brute(0);
  for (std::uint64_t e : {1, 3, 9})
    if (brute == 0 && decide(build_q_system(sc, 26, e)).solvable()) brute = e;
  EXPECT_EQ(idx, brute);
}

TEST(SeveriBrauer, IhcParameters) {
  CounterexampleReport a = ihc_counterexample(3, 2);
  EXPECT_EQ(a.r, 3u);
  EXPECT_EQ(a.fibral, 2);
  EXPECT_TRUE(a.ok());
  EXPECT_LT(a.index_wrt_P, Integer(static_cast<unsigned long>(a.e_obstructed)) + 1);
  CounterexampleReport b = ihc_counterexample(4, 3);
  EXPECT_EQ(b.r, 26u);
  EXPECT_EQ(b.fibral, 9);
  EXPECT_EQ(b.dim_P, 30u);
  EXPECT_THROW(ihc_counterexample(3, 3), InputError);
  EXPECT_THROW(ihc_counterexample(4, 2), InputError);
  EXPECT_THROW(ihc_counterexample(2, 2), InputError);
}

TEST(SeveriBrauer, ItcParameters) {
  CounterexampleReport a = itc_counterexample(2, 3);
  EXPECT_EQ(a.g, 3);
  EXPECT_EQ(a.n, 2u);
  EXPECT_EQ(a.r, 3u);
  EXPECT_EQ(a.dim_P, 6u);
  CounterexampleReport b = itc_counterexample(3, 2);
  EXPECT_EQ(b.g, 4);
  EXPECT_EQ(b.r, 26u);
  EXPECT_EQ(b.dim_P, 30u);
  EXPECT_FALSE(b.locality.is_global());
  EXPECT_THROW(itc_counterexample(2, 2), InputError);
  EXPECT_THROW(itc_counterexample(4, 3), InputError);
}
