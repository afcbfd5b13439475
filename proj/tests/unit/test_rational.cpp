#include <gtest/gtest.h>

#include <random>

#include "qmark/interval.hpp"
#include "qmark/rational.hpp"

using namespace qmark;

namespace {

BigInt random_big(std::mt19937_64& gen, int limbs) {
    BigInt v = 0;
    for (int i = 0; i < limbs; ++i) {
        v <<= 64;
        v += gen();
    }
    return (gen() & 1U) ? BigInt(-v) : v;
}

}  // namespace

TEST(Rational, StoredReduced) {
    const Rational r{BigInt(6), BigInt(-8)};
    EXPECT_EQ(r.num(), -3);
    EXPECT_EQ(r.den(), 4);
    EXPECT_EQ(Rational(BigInt(0), BigInt(-5)).den(), 1);
}

TEST(Rational, ZeroDenominatorRejected) {
    EXPECT_THROW(Rational(BigInt(1), BigInt(0)), Error);
    EXPECT_THROW(Rational::parse("1/0"), Error);
}

TEST(Rational, OrderMatchesCrossMultiplication) {
    std::mt19937_64 gen(7);
    for (int i = 0; i < 2000; ++i) {
        const long long a = static_cast<long long>(gen() % 2001) - 1000, b = static_cast<long long>(gen() % 999) + 1;
        const long long c = static_cast<long long>(gen() % 2001) - 1000, d = static_cast<long long>(gen() % 999) + 1;
        const Rational x{BigInt(a), BigInt(b)}, y{BigInt(c), BigInt(d)};
        EXPECT_EQ(x < y, a * d < c * b);
        EXPECT_EQ(x == y, a * d == c * b);
    }
}

TEST(Rational, ExactArithmeticOnBigOperands) {
    std::mt19937_64 gen(11);
    for (int i = 0; i < 300; ++i) {
        BigInt d1 = random_big(gen, 3), d2 = random_big(gen, 2);
        if (d1 == 0) d1 = 1;
        if (d2 == 0) d2 = 3;
        const Rational a(random_big(gen, 4), d1), b(random_big(gen, 3), d2);
        EXPECT_EQ((a + b) - b, a);
        if (!b.is_zero()) EXPECT_EQ((a * b) / b, a);
    }
}

TEST(Rational, ParseAndPrint) {
    EXPECT_EQ(Rational::parse("2/4").str(), "1/2");
    EXPECT_EQ(Rational::parse(" -3/9 ").str(), "-1/3");
    EXPECT_EQ(Rational::parse("+7").str(), "7");
    EXPECT_THROW(Rational::parse("0.5"), Error);
    EXPECT_THROW(Rational::parse("abc"), Error);
}

TEST(Rational, FloorCeil) {
    EXPECT_EQ(Rational::parse("7/2").floor(), 3);
    EXPECT_EQ(Rational::parse("7/2").ceil(), 4);
    EXPECT_EQ(Rational::parse("-7/2").floor(), -4);
    EXPECT_EQ(Rational::parse("-7/2").ceil(), -3);
    EXPECT_EQ(Rational(5).floor(), 5);
}

TEST(Mediant, Examples) {
    EXPECT_EQ(mediant(Rational(0), Rational(1)), Rational::parse("1/2"));
    EXPECT_EQ(mediant(Rational::parse("1/3"), Rational::parse("1/2")), Rational::parse("2/5"));
    EXPECT_EQ(mediant(Rational::parse("2/5"), Rational::parse("1/2")), Rational::parse("3/7"));
}

TEST(Mediant, InterleavesFareyNeighbours) {
    // Walk random paths down the tree; every new pair stays a neighbour pair.
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 200; ++trial) {
        Rational a(0), b(1);
        for (int step = 0; step < 40; ++step) {
            ASSERT_EQ(farey_determinant(a, b), 1);
            const Rational m = mediant(a, b);
            ASSERT_LT(a, m);
            ASSERT_LT(m, b);
            ASSERT_EQ(farey_determinant(a, m), 1);
            ASSERT_EQ(farey_determinant(m, b), 1);
            if (gen() & 1U)
                a = m;
            else
                b = m;
        }
    }
}

TEST(Dyadic, Examples) {
    const Dyadic d = to_dyadic(Rational::parse("3/8"));
    EXPECT_EQ(d.mantissa(), 3);
    EXPECT_EQ(d.exponent(), 3u);
    const Dyadic one = to_dyadic(Rational(1));
    EXPECT_EQ(one.mantissa(), 1);
    EXPECT_EQ(one.exponent(), 0u);
    try {
        to_dyadic(Rational::parse("1/3"));
        FAIL() << "expected NotDyadic";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotDyadic);
        EXPECT_EQ(e.name(), "NotDyadic");
    }
}

TEST(Dyadic, LowestTerms) {
    const Dyadic d(BigInt(12), 5);
    EXPECT_EQ(d.mantissa(), 3);
    EXPECT_EQ(d.exponent(), 3u);
    const Dyadic z(BigInt(0), 9);
    EXPECT_EQ(z.exponent(), 0u);
    const Dyadic n(BigInt(-4), 3);
    EXPECT_EQ(n.mantissa(), -1);
    EXPECT_EQ(n.exponent(), 1u);
}

TEST(Dyadic, RoundTrip) {
    std::mt19937_64 gen(5);
    for (int i = 0; i < 500; ++i) {
        const Dyadic d(BigInt(static_cast<long long>(gen() % 100000) - 50000), gen() % 80);
        EXPECT_EQ(to_dyadic(d.to_rational()), d);
        EXPECT_EQ(Dyadic::parse(d.str()), d);
    }
}

TEST(Dyadic, Rendering) {
    EXPECT_EQ(Dyadic(BigInt(3), 3).str(), "3/2^3");
    EXPECT_EQ(Dyadic(BigInt(3), 3).binary(), "0.011");
    EXPECT_EQ(Dyadic(BigInt(1), 0).binary(), "1");
    EXPECT_EQ(Dyadic::parse("1/2^10").to_rational(), Rational(BigInt(1), BigInt(1024)));
    EXPECT_EQ(Dyadic::parse("-1/2^4").to_rational(), Rational::parse("-1/16"));
    EXPECT_THROW(Dyadic::parse("1/6"), Error);
}

TEST(Interval, ArithmeticEncloses) {
    const Interval a(Rational::parse("1/3"), Rational::parse("1/2"));
    const Interval b(Rational(-2), Rational(3));
    const Interval p = a * b;
    EXPECT_EQ(p.lo(), Rational(-1));
    EXPECT_EQ(p.hi(), Rational::parse("3/2"));
    EXPECT_THROW(a / b, Error);
    EXPECT_THROW(Interval(Rational(2), Rational(1)), Error);
}

TEST(Interval, RoundedIsOutward) {
    const Interval a(Rational::parse("1/3"), Rational::parse("2/3"));
    const Interval r = a.rounded(10);
    EXPECT_TRUE(r.contains(a));
    EXPECT_NO_THROW(to_dyadic(r.lo()));
    EXPECT_NO_THROW(to_dyadic(r.hi()));
    EXPECT_LE(r.width() - a.width(), Rational(BigInt(2), BigInt(1024)));
}

TEST(Interval, ElementaryEnclosures) {
    // sqrt(2)^2 = 2, e in (2.718281828, 2.718281829), ln 2 and ln of exact powers.
    const Interval s = sqrt(Interval(Rational(2)), 80);
    EXPECT_TRUE((s * s).contains(Rational(2)));
    EXPECT_LT(s.width(), Rational(1).ldexp(-70));
    const Interval e = euler_e(80);
    EXPECT_TRUE(e.certainly_greater(Interval(Rational::parse("2718281828/1000000000"))));
    EXPECT_TRUE(e.certainly_less(Interval(Rational::parse("2718281829/1000000000"))));
    const Interval l8 = ln(Rational(8), 80);
    EXPECT_TRUE((l8 - ln2(80) * Interval(3)).contains(Rational(0)));
    EXPECT_TRUE(ln(Rational(1), 80).contains(Rational(0)));
    const Interval lq = ln(Rational::parse("1/1000"), 80) + ln(Rational(1000), 80);
    EXPECT_TRUE(lq.contains(Rational(0)));
    EXPECT_LT(lq.width(), Rational(1).ldexp(-70));
}

TEST(Interval, LnMatchesDoubleClosely) {
    for (long long n : {3LL, 5LL, 7LL, 10LL, 12345LL, 999999937LL}) {
        const Interval l = ln(Rational(n), 64);
        EXPECT_NEAR(l.mid_double(), std::log(static_cast<double>(n)), 1e-12);
    }
}

TEST(Interval, DecimalRendering) {
    EXPECT_EQ(Interval::to_decimal(Rational::parse("1/3"), 5), "0.33333");
    EXPECT_EQ(Interval::to_decimal(Rational::parse("-2/3"), 3), "-0.667");
    EXPECT_EQ(Interval::to_decimal(Rational(4), 2), "4.00");
}
