#include <gtest/gtest.h>

#include <random>

#include "../support/oracles.hpp"
#include "qmark/question_mark.hpp"

using namespace qmark;

namespace {

Rational R(const char* s) { return Rational::parse(s); }

}  // namespace

TEST(QmRational, Examples) {
    EXPECT_EQ(qm_rational(R("1/2")).str(), "1/2^1");
    EXPECT_EQ(qm_rational(R("1/3")).to_rational(), R("1/4"));
    EXPECT_EQ(qm_rational(R("2/5")).to_rational(), R("3/8"));
    EXPECT_EQ(qm_rational(R("0")).to_rational(), R("0"));
    EXPECT_EQ(qm_rational(R("1")).to_rational(), R("1"));
}

TEST(QmRational, DomainErrors) {
    for (const char* bad : {"-1/2", "3/2"}) {
        try {
            qm_rational(R(bad));
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::DomainError);
        }
        EXPECT_THROW(qm_mediant_oracle(R(bad)), Error);
    }
}

TEST(QmMediantOracle, Examples) {
    EXPECT_EQ(qm_mediant_oracle(R("1/2")).to_rational(), R("1/2"));
    EXPECT_EQ(qm_mediant_oracle(R("2/5")).to_rational(), R("3/8"));
    EXPECT_EQ(qm_mediant_oracle(R("3/7")).to_rational(), R("7/16"));
    EXPECT_EQ(qm_rational(R("3/7")).to_rational(), R("7/16"));
}

TEST(QmRational, AgreesWithOracleAndIsSymmetric) {
    for (long long q = 1; q <= 200; ++q) {
        for (long long p = 0; p <= q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            const Rational x{BigInt(p), BigInt(q)};
            const Dyadic v = qm_rational(x);
            ASSERT_EQ(v, qm_mediant_oracle(x)) << x.str();
            ASSERT_EQ(qm_rational(Rational(1) - x).to_rational(), Rational(1) - v.to_rational()) << x.str();
        }
    }
}

TEST(SternBrocot, Examples) {
    EXPECT_EQ(stern_brocot_level(0).points, (std::vector<Rational>{R("0"), R("1")}));
    EXPECT_EQ(stern_brocot_level(1).points, (std::vector<Rational>{R("0"), R("1/2"), R("1")}));
    EXPECT_EQ(stern_brocot_level(2).points, (std::vector<Rational>{R("0"), R("1/3"), R("1/2"), R("2/3"), R("1")}));
    try {
        stern_brocot_level(25);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::LimitError);
    }
}

TEST(SternBrocot, LevelInvariantsAgainstQuotientSumOracle) {
    for (unsigned n = 0; n <= 12; ++n) {
        const auto lv = stern_brocot_level(n);
        ASSERT_EQ(lv.points.size(), (std::size_t{1} << n) + 1);
        const auto ref = oracle::farey_level_by_sum(n);
        ASSERT_EQ(ref.size(), lv.points.size());
        for (std::size_t i = 0; i < ref.size(); ++i)
            ASSERT_EQ(lv.points[i], Rational(BigInt(ref[i].first), BigInt(ref[i].second)));
        for (std::size_t i = 0; i + 1 < lv.points.size(); ++i) ASSERT_EQ(farey_determinant(lv.points[i], lv.points[i + 1]), 1);
        if (n > 0) {
            const auto prev = stern_brocot_level(n - 1);
            for (std::size_t i = 0; i < prev.points.size(); ++i) ASSERT_EQ(lv.points[2 * i], prev.points[i]);
        }
    }
}

TEST(SternBrocot, MonotoneQuestionMark) {
    for (unsigned n = 1; n <= 14; ++n) {
        const auto lv = stern_brocot_level(n);
        for (std::size_t i = 0; i + 1 < lv.points.size(); ++i)
            ASSERT_LT(qm_rational(lv.points[i]), qm_rational(lv.points[i + 1]));
    }
}

TEST(Distribution, Examples) {
    const auto lv = stern_brocot_level(2);
    EXPECT_EQ(qm_rational(lv.points[1]).to_rational(), R("1/4"));
    EXPECT_EQ(qm_rational(lv.points[3]).to_rational(), R("3/4"));
    EXPECT_EQ(qm_rational(lv.points[0]).to_rational(), R("0"));
}

TEST(Distribution, ExactAtEveryLevel) {
    for (unsigned n = 0; n <= 14; ++n) {
        const DistributionReport rep = distribution_check(n);
        EXPECT_TRUE(rep.holds()) << n;
        EXPECT_EQ(rep.checked, (std::size_t{1} << n) + 1);
    }
    EXPECT_THROW(distribution_check(21), Error);
}

TEST(QmIrrational, ClosedForms) {
    const Rational eps = Rational(1).ldexp(-20);
    const Interval g = qm_irrational(CFSpec::parse("[0;(1)]"), eps);
    EXPECT_TRUE(g.contains(R("2/3")));
    EXPECT_LE(g.width(), eps);
    const Interval s = qm_irrational(CFSpec::parse("[0;(2)]"), eps);
    EXPECT_TRUE(s.contains(R("2/5")));
    EXPECT_LE(s.width(), eps);
    const Interval any = qm_irrational(CFSpec::parse("[0;(1)]"), Rational(1));
    EXPECT_LE(any.width(), Rational(1));
    EXPECT_TRUE(any.contains(R("2/3")));
}

TEST(QmIrrational, ClosedFormForPeriodicTails) {
    // [0;(a)]: geometric series with ratio 2^-a gives 2^(1-a) / (1 + 2^-a).
    for (long long a = 1; a <= 6; ++a) {
        const Rational r = Rational(1).ldexp(-a);
        const Rational expect = Rational(1).ldexp(1 - a) / (Rational(1) + r);
        const Interval v = qm_irrational(CFSpec::periodic(CFWord{static_cast<Quotient>(a)}), Rational(1).ldexp(-40));
        EXPECT_TRUE(v.contains(expect)) << a;
    }
}

TEST(QmIrrational, EnclosuresNest) {
    const CFSpec spec = CFSpec::parse("[0; 2, (1, 3, 1)]");
    Interval prev = qm_partial_enclosure(spec, 1);
    for (std::size_t n = 2; n < 40; ++n) {
        const Interval cur = qm_partial_enclosure(spec, n);
        EXPECT_TRUE(prev.contains(cur)) << n;
        prev = cur;
    }
    EXPECT_THROW(qm_irrational(CFSpec::finite(CFWord{2}), Rational(1)), Error);
    EXPECT_THROW(qm_irrational(spec, Rational(0)), Error);
}

TEST(FareySearch, Examples) {
    const FareySearch a = farey_interval_search(R("2/5"), R("1/20"));
    EXPECT_EQ(farey_determinant(a.xi0, a.xi1), 1);
    EXPECT_EQ(mediant(a.xi0, a.xi1), a.xi);
    EXPECT_LT(R("2/5"), a.xi);
    EXPECT_LT(a.xi, R("9/20"));

    const FareySearch b = farey_interval_search(R("1/3") + R("1/1000"), R("1/6") - R("2/1000"));
    EXPECT_EQ(b.xi, R("2/5"));

    const FareySearch c = farey_interval_search(R("2/5"), R("1/5"));
    EXPECT_EQ(c.n, 0u);
    EXPECT_EQ(c.xi, R("1/2"));
}

TEST(FareySearch, AgreesWithMaterialisedLevels) {
    std::mt19937_64 gen(31);
    for (int trial = 0; trial < 300; ++trial) {
        const long long den = 1 << 14;
        const long long lo = 1 + static_cast<long long>(gen() % (den - 200));
        const long long w = 1 + static_cast<long long>(gen() % 200);
        const Rational x{BigInt(lo), BigInt(den)}, d{BigInt(w), BigInt(den)};
        const FareySearch s = farey_interval_search(x, d);
        if (s.n >= 11) continue;
        const unsigned ref = oracle::brute_farey_n(static_cast<double>(lo) / den, static_cast<double>(lo + w) / den, 12);
        ASSERT_EQ(s.n, ref) << x.str() << " " << d.str();
        const auto lv = stern_brocot_level(s.n);
        const auto it = std::find(lv.points.begin(), lv.points.end(), s.xi0);
        ASSERT_NE(it, lv.points.end());
        ASSERT_EQ(*(it + 1), s.xi1);
    }
}

TEST(FareySearch, Errors) {
    try {
        farey_interval_search(R("1/3"), R("0"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::DegenerateInterval);
    }
    EXPECT_THROW(farey_interval_search(R("9/10"), R("1/5")), Error);
}

TEST(Sandwich, Examples) {
    const SandwichReport a = sandwich(CFSpec::parse("[0;(1)]"), 40, Dyadic::parse("1/2^10"));
    EXPECT_TRUE(a.holds());
    const SandwichReport b = sandwich(CFSpec::parse("[0;(1,2)]"), 40, Dyadic::parse("1/2^15"));
    EXPECT_TRUE(b.holds());
    const SandwichReport c = sandwich(CFSpec::parse("[0;(2)]"), 40, Dyadic::parse("-1/2^12"));
    EXPECT_TRUE(c.mirrored);
    EXPECT_TRUE(c.holds());
}

TEST(Sandwich, QuotientIsExact) {
    const SandwichReport r = sandwich(CFSpec::parse("[0;(1)]"), 30, Dyadic::parse("1/2^8"));
    const Rational expect = (qm_mediant_oracle(r.x + r.delta).to_rational() - qm_mediant_oracle(r.x).to_rational()) / r.delta;
    EXPECT_EQ(r.quotient, expect);
}

TEST(Sandwich, RandomTrials) {
    const char* specs[] = {"[0;(1)]", "[0;(1,2)]", "[0;(2)]", "[0;(3,1)]", "[0; 2, (1, 1, 3)]", "[0;(4,1)]"};
    std::mt19937_64 gen(41);
    std::size_t branches[3] = {0, 0, 0};
    for (int trial = 0; trial < 600; ++trial) {
        const CFSpec spec = CFSpec::parse(specs[gen() % 6]);
        const std::uint64_t k = 5 + gen() % 16;
        const Dyadic delta(BigInt((gen() & 1U) ? 1 : -1), k);
        const SandwichReport r = sandwich(spec, 40, delta);
        ASSERT_TRUE(r.holds()) << spec.str() << " " << delta.str();
        ASSERT_LE(r.z, 2 + std::max(spec.quotient(r.t + 1), spec.quotient(r.t + 2)));
        branches[r.branch == "i1" ? 0 : r.branch == "i2" ? 1 : 2]++;
    }
    EXPECT_GT(branches[0] + branches[1], 0u);
    EXPECT_GT(branches[2], 0u);
}

TEST(Sandwich, GuardAndDomain) {
    try {
        sandwich(CFSpec::parse("[0;(1)]"), 6, Dyadic::parse("1/2^20"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::GuardError);
    }
    EXPECT_THROW(sandwich(CFSpec::finite(CFWord{2}), 1, Dyadic::parse("1/2^4")), Error);
    EXPECT_THROW(sandwich(CFSpec::parse("[0;(1)]"), 40, Dyadic::parse("0")), Error);
    EXPECT_THROW(sandwich(CFSpec::parse("[0;(1)]"), 40, Dyadic::parse("1/2")), Error);
}
