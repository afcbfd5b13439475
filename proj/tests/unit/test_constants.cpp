#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "qmark/constants.hpp"

using namespace qmark;

namespace {

// Reference decimals to 30+ digits, from an independent multiprecision package.
const char* const kLambda[] = {
    "1.6180339887498948482045868343656381", "2.4142135623730950488016887242096981",
    "3.302775637731994646559610633735248",  "4.2360679774997896964091736687312762",
    "5.1925824035672520156253552457701648", "6.1622776601683793319988935444327185"};
const char* const kL[] = {
    "0.13463823477963079278914285269528014",   "0.18822640645959771581537720352161574",
    "0.15504244644719133998608264633182567",   "0.057341114058919723658812497356752133",
    "-0.085636805028767562918221693201821757", "-0.26099508244776910476799740081382071",
    "-0.46029466031015706172155607643354869",  "-0.67787617497867994342410563976717762",
    "-0.90981460390441961467186806565598756",  "-1.1532975615269739268325982659264685",
    "-1.406250367781681964305982100898129",    "-1.6671032307147598860736001915924366"};

/// Decimal string -> exact rational.
Rational dec(const std::string& s) {
    const auto dot = s.find('.');
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const bool neg = digits[0] == '-';
    digits.erase(0, digits.find_first_not_of("-0"));
    if (digits.empty()) digits = "0";
    if (neg) digits.insert(0, "-");
    BigInt scale = 1;
    for (std::size_t i = dot + 1; i < s.size(); ++i) scale *= 10;
    return Rational(BigInt(digits), scale);
}

/// |mid - reference| below 10^-30 and the enclosure contains the reference
/// up to that slack.
void expect_close(const Interval& iv, const char* ref) {
    const Rational r = dec(ref);
    const Rational slack(BigInt(1), BigInt("1000000000000000000000000000000"));
    EXPECT_TRUE(Interval(iv.lo() - slack, iv.hi() + slack).contains(r)) << ref << " vs " << iv.decimal(35);
}

}  // namespace

TEST(Spectral, MatchesReferenceDecimals) {
    for (Quotient j = 1; j <= 6; ++j) expect_close(spectral(j, 128).lambda, kLambda[j - 1]);
    for (Quotient j = 1; j <= 12; ++j) expect_close(L(j, 128), kL[j - 1]);
}

TEST(Spectral, Examples) {
    const SpectralConstants& s1 = spectral(1);
    EXPECT_TRUE(Interval(dec("1.6180339887"), dec("1.6180339888")).contains(s1.lambda));
    EXPECT_TRUE(L(4).positive());
    EXPECT_TRUE(L(5).negative());
    EXPECT_NEAR(L(4).mid_double(), 0.0573411, 1e-7);
    EXPECT_NEAR(L(5).mid_double(), -0.0856368, 1e-7);
}

TEST(Spectral, Invariants) {
    const Rational w64 = Rational(1).ldexp(-64);
    for (Quotient j = 1; j <= 30; ++j) {
        const SpectralConstants& s = spectral(j);
        const Rational jr{BigInt(j)};
        EXPECT_GT(s.lambda.lo(), jr);
        EXPECT_LT(s.lambda.hi(), jr + Rational(1));
        EXPECT_TRUE((s.c1 + s.c2).contains(Rational(1)));
        const Rational bound = jr / (jr * jr + Rational(1));
        EXPECT_GT(s.c1.lo(), Rational(1) - bound);
        EXPECT_LT(s.c1.hi(), Rational(1));
        EXPECT_GT(s.c2.lo(), Rational(0));
        EXPECT_LT(s.c2.hi(), bound);
        EXPECT_LE(s.lambda.width(), w64);
        EXPECT_LE(s.L.width(), w64);
        EXPECT_LE(s.c1.width(), w64);
        // lambda^2 = j lambda + 1
        EXPECT_TRUE((s.lambda * s.lambda - Interval(jr) * s.lambda).contains(Rational(1)));
        // double-precision cross-check
        const double lam = (static_cast<double>(j) + std::sqrt(static_cast<double>(j * j + 4))) / 2;
        EXPECT_NEAR(s.L.mid_double(), std::log(lam) - static_cast<double>(j) * std::log(2.0) / 2, 1e-12);
    }
}

TEST(Spectral, BinetFormulaReproducesContinuants) {
    for (Quotient j = 1; j <= 6; ++j) {
        const SpectralConstants& s = spectral(j, 128);
        for (unsigned l = 0; l <= 20; ++l) {
            const Interval inv = Interval(Rational(1)) / s.lambda;
            Interval alt = pow(inv, l, 200);
            if (l % 2 == 1) alt = -alt;
            const Interval k = s.c1 * pow(s.lambda, l, 200) + s.c2 * alt;
            EXPECT_TRUE(k.contains(Rational(constant_continuant(l, j)))) << "l=" << l << " j=" << j;
        }
    }
}

TEST(Kappas, Examples) {
    const Kappa& k = kappas();
    EXPECT_TRUE(Interval(dec("1.388"), dec("1.389")).contains(k.kappa1));
    EXPECT_TRUE(Interval(dec("4.401"), dec("4.402")).contains(k.kappa2));
    EXPECT_TRUE(Interval(dec("5.319"), dec("5.320")).contains(k.kappa3));
    const Rational w64 = Rational(1).ldexp(-64);
    EXPECT_LE(k.kappa1.width(), w64);
    EXPECT_LE(k.kappa2.width(), w64);
    EXPECT_LE(k.kappa3.width(), w64);
}

TEST(Kappas, MatchReferenceDecimals) {
    const Kappa& k = kappas(128);
    expect_close(k.kappa1, "1.3884838272612346034775805337971904");
    expect_close(k.kappa2, "4.4010487383282788442994663697204858");
    expect_close(k.kappa3, "5.319722355838364669886803252888197");
}

TEST(Kappas, DefiningEquations) {
    const unsigned bits = 96;
    const Kappa& k = kappas(bits);
    // (kappa2 - 4) L5 + (5 - kappa2) L4 = 0
    const Interval v = (k.kappa2 - Interval(4)) * L(5, bits) + (Interval(5) - k.kappa2) * L(4, bits);
    EXPECT_TRUE(v.contains(Rational(0)));
    // 2 log2(1 + kappa3) - kappa3 = 0
    const Interval f = Interval(2) * ln(k.kappa3 + Interval(1), 200) / ln2(200) - k.kappa3;
    EXPECT_TRUE(f.contains(Rational(0)));
    // kappa1 = log2(lambda1^2)
    EXPECT_TRUE((k.kappa1 * ln2(200) - Interval(2) * ln(spectral(1, bits).lambda, 200)).contains(Rational(0)));
}

TEST(Orderings, AllCertified) {
    const OrderingReport rep = check_orderings();
    EXPECT_TRUE(rep.all_certified());
    ASSERT_EQ(rep.comparisons.size(), 13u);
    const Comparison& ratio = rep.comparisons.back();
    EXPECT_EQ(ratio.claim, "L5/(L5-L4) >= 1/2");
    EXPECT_NEAR(ratio.margin.mid_double() + 0.5, 0.5989512616717, 1e-12);
    bool saw_l6 = false;
    for (const auto& c : rep.comparisons)
        if (c.claim == "L5 > L6") saw_l6 = c.certified;
    EXPECT_TRUE(saw_l6);
}

TEST(Precision, DoublingShrinksAndNests) {
    for (Quotient j : {1ULL, 4ULL, 5ULL, 9ULL}) {
        const Interval& a = L(j, 64);
        const Interval& b = L(j, 128);
        EXPECT_TRUE(a.intersects(b));
        EXPECT_LT(b.width(), a.width());
    }
    const OrderingReport lo = check_orderings(64), hi = check_orderings(128);
    for (std::size_t i = 0; i < lo.comparisons.size(); ++i)
        EXPECT_EQ(lo.comparisons[i].certified, hi.comparisons[i].certified);
}

TEST(Precision, ConcurrentCacheAccess) {
    std::vector<std::thread> pool;
    std::vector<std::string> out(8);
    for (int i = 0; i < 8; ++i)
        pool.emplace_back([&, i] { out[static_cast<std::size_t>(i)] = kappas(80).kappa2.decimal(20) + L(7, 80).decimal(20); });
    for (auto& t : pool) t.join();
    for (const auto& s : out) EXPECT_EQ(s, out[0]);
}

TEST(Spectral, RejectsZero) { EXPECT_THROW(spectral(0), Error); }
