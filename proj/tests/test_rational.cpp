#include <gtest/gtest.h>

#include "pindex/rational.hpp"

using namespace pindex;

TEST(Rational, FractionStringsAreExact) {
  EXPECT_EQ(to_fraction_string(Rational(3)), "3/1");
  EXPECT_EQ(to_fraction_string(Rational(-6, 4)), "-3/2");
  EXPECT_EQ(parse_fraction("-6/4"), Rational(-3, 2));
  EXPECT_EQ(parse_fraction("7"), Rational(7));
  EXPECT_THROW(parse_fraction("0.5"), InputError);
  EXPECT_THROW(parse_fraction("1/0"), InputError);
  EXPECT_THROW(parse_fraction("1/-2"), InputError);
  EXPECT_THROW(parse_fraction(""), InputError);
}

TEST(Rational, Valuations) {
  EXPECT_EQ(valuation(Integer(48), 2), 4);
  EXPECT_EQ(valuation(Rational(9, 8), 2), -3);
  EXPECT_EQ(valuation(Rational(9, 8), 3), 2);
  EXPECT_THROW(valuation(Integer(0), 2), InputError);
}

TEST(Rational, IntegralityByLocality) {
  EXPECT_FALSE(is_integral(Rational(1, 2), Locality::global()));
  EXPECT_TRUE(is_integral(Rational(1, 2), Locality::local_at(3)));
  EXPECT_FALSE(is_integral(Rational(1, 6), Locality::local_at(3)));
  EXPECT_THROW(Locality::local_at(4), InputError);
  EXPECT_THROW(Locality::local_at(1), InputError);
}

TEST(Rational, Combinatorics) {
  EXPECT_EQ(binomial(8, 3), 56);
  EXPECT_EQ(binomial(3, 5), 0);
  EXPECT_EQ(factorial(6), 720);
  EXPECT_EQ(falling_factorial(3, 2), 6);
  EXPECT_EQ(falling_factorial(5, 0), 1);
  EXPECT_EQ(rational_power(2, -3), Rational(1, 8));
  EXPECT_TRUE(is_prime_power(9));
  EXPECT_TRUE(is_prime_power(5));
  EXPECT_FALSE(is_prime_power(6));
  EXPECT_FALSE(is_prime_power(1));
  EXPECT_TRUE(is_power_of(27, 3));
  EXPECT_FALSE(is_power_of(18, 3));
}

TEST(Rational, FloorOfNegatives) {
  EXPECT_EQ(pindex::floor(Rational(-1, 2)), -1);
  EXPECT_EQ(pindex::floor(Rational(7, 2)), 3);
  EXPECT_EQ(pindex::floor(Rational(-4)), -4);
}
