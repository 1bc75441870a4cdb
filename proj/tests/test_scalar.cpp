#include <hdnewton/scalar.hpp>

#include <gtest/gtest.h>

#include "support/oracles.hpp"

using namespace hdnewton;

TEST(RoundDownToGrid, ExactMultipleIsKept) { EXPECT_EQ(round_down_to_grid(Rational(1, 2), Rational(1, 2)), Rational(1, 2)); }

TEST(RoundDownToGrid, FloorsPositiveValues) {
  EXPECT_EQ(round_down_to_grid(Rational(10, 3), Rational(1, 4)), Rational(13, 4));
}

TEST(RoundDownToGrid, FloorsTowardMinusInfinity) {
  EXPECT_EQ(round_down_to_grid(Rational(-1, 3), Rational(1, 4)), Rational(-1, 2));
}

TEST(RoundDownToGrid, RejectsNonPositiveGrid) {
  EXPECT_THROW(round_down_to_grid(Rational(1), Rational(0)), std::invalid_argument);
  EXPECT_THROW(round_down_to_grid(Rational(1), Rational(-1, 3)), std::invalid_argument);
}

TEST(RoundDownToGrid, BracketsInput) {
  ref::Gen g(11);
  for (int i = 0; i < 500; ++i) {
    const Rational x = g.signed_rational(1000, 97);
    const Rational grid(g.in_range(1, 50), g.in_range(1, 64));
    const Rational r = round_down_to_grid(x, grid);
    EXPECT_LE(r, x);
    EXPECT_LT(x, r + grid);
    EXPECT_EQ(Rational(r / grid).get_den(), 1);
  }
}

TEST(NthRootUpperBound, ExactIntegerRoots) {
  EXPECT_EQ(nth_root_upper_bound(8, 3), Rational(2));
  EXPECT_EQ(nth_root_upper_bound(64, 6), Rational(2));
  EXPECT_EQ(nth_root_upper_bound(64, 6, 3), Rational(2));
  EXPECT_EQ(nth_root_upper_bound(1, 5), Rational(1));
  EXPECT_EQ(nth_root_upper_bound(16, 4), Rational(2));
}

TEST(NthRootUpperBound, SqrtTenWithinSlack) {
  const Rational r = nth_root_upper_bound(10, 2, 20);
  EXPECT_GE(r * r, 10);
  const Rational shrunk = r / (1 + Rational(1, 1 << 20));
  EXPECT_LE(shrunk * shrunk, 10);
}

TEST(NthRootUpperBound, PropertySweep) {
  for (unsigned long n = 1; n <= 300; n += 7) {
    for (unsigned long k = 1; k <= 12; ++k) {
      for (unsigned s : {1u, 5u, 20u}) {
        const Rational r = nth_root_upper_bound(n, k, s);
        EXPECT_GE(rpow(r, k), Rational(n)) << n << " " << k << " " << s;
        const Rational shrunk = r / (1 + Rational(Integer(1), pow2(s)));
        EXPECT_LE(rpow(shrunk, k), Rational(n)) << n << " " << k << " " << s;
        // 1/r is dyadic
        EXPECT_EQ(mpz_popcount(r.get_num().get_mpz_t()), 1u);
      }
    }
  }
}

TEST(NthRootUpperBound, RejectsZero) {
  EXPECT_THROW(nth_root_upper_bound(0, 2), std::invalid_argument);
  EXPECT_THROW(nth_root_upper_bound(2, 0), std::invalid_argument);
}

TEST(TwoEUpperBound, ValueAndSquare) {
  EXPECT_EQ(two_e_upper_bound(), Rational(136, 25));
  EXPECT_EQ(rpow(two_e_upper_bound(), 2), Rational(18496, 625));
}

TEST(TwoEUpperBound, DominatesTwiceE) {
  // e < sum_{i<=12} 1/i! + 2/13!
  Rational e = 0, term = 1;
  for (long i = 0; i <= 12; ++i) {
    if (i > 0) term /= i;
    e += term;
  }
  e += 2 * term / 13;
  EXPECT_LT(2 * e, two_e_upper_bound());
}

TEST(SqrtUpperBound, Brackets) {
  ref::Gen g(5);
  for (int i = 0; i < 300; ++i) {
    const Rational x(g.in_range(1, 100000), g.in_range(1, 1000));
    const Rational s = sqrt_upper_bound(x, 20);
    EXPECT_GE(s * s, x);
    const Rational shrunk = s / (1 + Rational(1, 1 << 20));
    EXPECT_LE(shrunk * shrunk, x);
  }
}

TEST(CeilLog2, Values) {
  EXPECT_EQ(ceil_log2(Rational(1)), 0);
  EXPECT_EQ(ceil_log2(Rational(1024)), 10);
  EXPECT_EQ(ceil_log2(Rational(1025)), 11);
  EXPECT_EQ(ceil_log2(Rational(1, 1024)), -10);
  EXPECT_EQ(ceil_log2(Rational(3, 1024)), -8);
  EXPECT_THROW(ceil_log2(Rational(0)), std::invalid_argument);
}

TEST(Pow2Floor, Values) {
  EXPECT_EQ(pow2_floor(Rational(1)), Rational(1));
  EXPECT_EQ(pow2_floor(Rational(3)), Rational(2));
  EXPECT_EQ(pow2_floor(Rational(1, 3)), Rational(1, 4));
  EXPECT_EQ(pow2_floor(Rational(1, 4)), Rational(1, 4));
}

TEST(BitSize, CountsNumeratorAndDenominator) {
  EXPECT_EQ(bit_size(Rational(1, 1024)), 12u);
  EXPECT_EQ(bit_size(Rational(0)), 2u);
  EXPECT_EQ(bit_size(Rational(-5, 3)), 5u);
}

TEST(ParseRational, AcceptsForms) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-3/6"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("0/5"), Rational(0));
  EXPECT_EQ(to_string(parse_rational("10/4")), "5/2");
  EXPECT_EQ(to_string(Rational(7)), "7");
}

TEST(ParseRational, RejectsGarbage) {
  for (const char* bad : {"", "-", "1/", "/2", "1/0", "1.5", "a", "1/-2", "+1", "1 /2", "--1"})
    EXPECT_THROW(parse_rational(bad), std::invalid_argument) << bad;
}

TEST(ParseRational, RoundTrip) {
  ref::Gen g(3);
  for (int i = 0; i < 200; ++i) {
    const Rational x = g.signed_rational(1000000, 999);
    EXPECT_EQ(parse_rational(to_string(x)), x);
  }
}

TEST(ToDecimal, Renders) {
  EXPECT_EQ(to_decimal(Rational(3)), "3.0000000000000000000e+00");
  EXPECT_EQ(to_decimal(Rational(3073, 1024)), "3.0009765625000000000e+00");
  EXPECT_EQ(to_decimal(Rational(-1, 3)), "-3.3333333333333333333e-01");
  EXPECT_EQ(to_decimal(Rational(2, 3)), "6.6666666666666666667e-01");
  EXPECT_EQ(to_decimal(Rational(0)), "0.0000000000000000000e+00");
  EXPECT_EQ(to_decimal(Rational(1000)), "1.0000000000000000000e+03");
  EXPECT_EQ(to_decimal(Rational(5, 2), 1), "2e+00");  // half to even
  EXPECT_EQ(to_decimal(Rational(7, 2), 1), "4e+00");
  EXPECT_EQ(to_decimal(Rational(999999, 100000), 3), "1.00e+01");
}

TEST(Fraction, AgreesWithCanonicalArithmetic) {
  ref::Gen g(9);
  for (int i = 0; i < 300; ++i) {
    const Rational a = g.signed_rational(50, 40), b = g.signed_rational(50, 40);
    const Fraction fa(a), fb(b);
    EXPECT_EQ((fa * fb).canonical(), a * b);
    EXPECT_EQ((fa + fb).canonical(), a + b);
    EXPECT_EQ((fa - fb).canonical(), a - b);
    if (b != 0) {
      EXPECT_EQ((fa / fb).canonical(), a / b);
    }
    EXPECT_EQ(compare(fa, b), a < b ? -1 : (a > b ? 1 : 0));
    EXPECT_EQ(fa.floor(), floor_of(a));
  }
}

TEST(Fraction, StripTwosKeepsValue) {
  Fraction f(Integer(48), Integer(-80));
  EXPECT_EQ(f.sign(), -1);
  f.strip_twos();
  EXPECT_EQ(f.num(), -3);
  EXPECT_EQ(f.den(), 5);
  EXPECT_THROW(Fraction(Integer(1), Integer(0)), std::domain_error);
}
