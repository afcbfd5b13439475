#pragma once

#include <cstdint>
#include <cstdlib>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "qmark/continued_fraction.hpp"
#include "qmark/interval.hpp"

namespace qmark {

inline constexpr unsigned kDefaultPrecisionBits = 64;
inline constexpr unsigned kMaxPrecisionBits = 256;

/// Working precision for the constants; QM_PRECISION_BITS overrides the default.
inline unsigned default_precision() {
    static const unsigned bits = [] {
        if (const char* env = std::getenv("QM_PRECISION_BITS")) {
            char* end = nullptr;
            const unsigned long v = std::strtoul(env, &end, 10);
            if (end != env && *end == '\0' && v >= 16 && v <= 4096) return static_cast<unsigned>(v);
        }
        return kDefaultPrecisionBits;
    }();
    return bits;
}

/// Certified enclosures tied to the partial quotient j:
///   lambda = (j + sqrt(j^2+4)) / 2,  L = ln(lambda) - j ln(2) / 2,
///   and c1, c2 with k_{l,j} = c1 lambda^l + c2 (-lambda)^-l.
struct SpectralConstants {
    Quotient j = 0;
    unsigned bits = 0;
    Interval lambda;
    Interval L;
    Interval c1;
    Interval c2;
};

struct Kappa {
    unsigned bits = 0;
    Interval kappa1;  ///< 2 ln(lambda_1) / ln 2
    Interval kappa2;  ///< (4 L_5 - 5 L_4) / (L_5 - L_4)
    Interval kappa3;  ///< root of 2 log2(1+x) - x beyond 2
};

namespace detail {

inline unsigned guard_bits(unsigned bits) { return bits + 32; }

inline SpectralConstants compute_spectral(Quotient j, unsigned bits) {
    if (j == 0) fail(ErrorKind::DomainError, "spectral constants need j >= 1");
    const unsigned work = guard_bits(bits);
    const Rational jr{BigInt(j)};
    // sqrt(j^2 + 4)
    const Interval s = sqrt(Interval(jr * jr + Rational(4)), work);
    SpectralConstants c;
    c.j = j;
    c.bits = bits;
    c.lambda = ((Interval(jr) + s) * Interval(Rational(1, 2))).rounded(work);
    c.L = (ln(c.lambda, work) - ln2(work) * Interval(jr * Rational(1, 2))).rounded(work);
    // From c1 + c2 = 1 and c1 lambda - c2 / lambda = j, using 1/lambda = lambda - j:
    // c1 = lambda / s = 1/2 + j / (2 s), c2 = 1/2 - j / (2 s).
    const Interval half(Rational(1, 2));
    const Interval shift = (Interval(jr) / (Interval(2) * s)).rounded(work);
    c.c1 = half + shift;
    c.c2 = half - shift;
    return c;
}

inline Interval kappa3_root(unsigned bits) {
    const unsigned work = guard_bits(bits);
    const Interval l2 = ln2(work);
    auto f = [&](const Rational& x) { return Interval(2) * ln(x + Rational(1), work) / l2 - Interval(x); };
    Rational lo(5), hi(6);
    if (!f(lo).positive() || !f(hi).negative()) fail(ErrorKind::PrecisionError, "kappa3 bracket lost");
    const Rational target = Rational(1).ldexp(-static_cast<long long>(bits) - 4);
    while (hi - lo > target) {
        const Rational m = (lo + hi) / Rational(2);
        const Interval fm = f(m);
        if (fm.positive()) {
            lo = m;
        } else if (fm.negative()) {
            hi = m;
        } else {
            break;  // the midpoint is within working precision of the root
        }
    }
    return Interval(lo, hi);
}

template <class Key, class Value, class Make>
const Value& cached(std::map<Key, Value>& cache, std::mutex& mu, const Key& key, Make make) {
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    Value v = make();
    std::lock_guard lock(mu);
    return cache.try_emplace(key, std::move(v)).first->second;  // std::map references stay valid
}

}  // namespace detail

/// Cached; safe to call concurrently.
inline const SpectralConstants& spectral(Quotient j, unsigned bits = default_precision()) {
    static std::map<std::pair<Quotient, unsigned>, SpectralConstants> cache;
    static std::mutex mu;
    return detail::cached(cache, mu, std::pair{j, bits}, [&] { return detail::compute_spectral(j, bits); });
}

inline const Interval& L(Quotient j, unsigned bits = default_precision()) { return spectral(j, bits).L; }

inline const Kappa& kappas(unsigned bits = default_precision()) {
    static std::map<unsigned, Kappa> cache;
    static std::mutex mu;
    return detail::cached(cache, mu, bits, [&] {
        const unsigned work = detail::guard_bits(bits);
        Kappa k;
        k.bits = bits;
        const Interval& lam1 = spectral(1, bits).lambda;
        k.kappa1 = (Interval(2) * ln(lam1, work) / ln2(work)).rounded(work);
        const Interval& l4 = L(4, bits);
        const Interval& l5 = L(5, bits);
        k.kappa2 = ((Interval(4) * l5 - Interval(5) * l4) / (l5 - l4)).rounded(work);
        k.kappa3 = detail::kappa3_root(bits);
        return k;
    });
}

struct Comparison {
    std::string claim;   ///< e.g. "L2 > L3"
    Interval margin;     ///< enclosure of lhs - rhs
    bool certified = false;
};

struct OrderingReport {
    unsigned bits = 0;
    std::vector<Comparison> comparisons;
    bool all_certified() const {
        for (const auto& c : comparisons)
            if (!c.certified) return false;
        return !comparisons.empty();
    }
};

/// L2 > L3 > L1 > L4 > 0 > L5 > L6 > ... > L12 and L5 / (L5 - L4) >= 1/2,
/// refining precision up to 128 bits before giving up.
inline OrderingReport check_orderings(unsigned bits = default_precision()) {
    for (unsigned b = bits;; b *= 2) {
        OrderingReport rep;
        rep.bits = b;
        auto greater = [&](const std::string& name, const Interval& a, const Interval& c) {
            const Interval m = a - c;
            rep.comparisons.push_back({name, m, m.positive()});
        };
        auto Lj = [&](Quotient j) { return L(j, b); };
        greater("L2 > L3", Lj(2), Lj(3));
        greater("L3 > L1", Lj(3), Lj(1));
        greater("L1 > L4", Lj(1), Lj(4));
        greater("L4 > 0", Lj(4), Interval(0));
        greater("0 > L5", Interval(0), Lj(5));
        for (Quotient j = 5; j < 12; ++j)
            greater("L" + std::to_string(j) + " > L" + std::to_string(j + 1), Lj(j), Lj(j + 1));
        const Interval ratio = Lj(5) / (Lj(5) - Lj(4));
        // ">=" is certified by the strict version.
        rep.comparisons.push_back({"L5/(L5-L4) >= 1/2", ratio - Interval(Rational(1, 2)),
                                   (ratio - Interval(Rational(1, 2))).positive()});
        if (rep.all_certified()) return rep;
        if (b >= 128) fail(ErrorKind::PrecisionError, "orderings not separable at 128 bits");
    }
}

/// k_{l,j} < lambda_j^l, certified against a lower enclosure of lambda_j^l.
struct KontCheck {
    std::uint64_t l = 0;
    Quotient j = 0;
    BigInt continuant;
    Interval power;
    bool holds = false;
};

inline KontCheck check_kont(std::uint64_t l, Quotient j, unsigned bits = default_precision()) {
    KontCheck k;
    k.l = l;
    k.j = j;
    k.continuant = constant_continuant(l, j);
    k.power = pow(spectral(j, bits).lambda, static_cast<unsigned>(l), detail::guard_bits(bits));
    k.holds = Rational(k.continuant) < k.power.lo();
    return k;
}

}  // namespace qmark
