#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qmark/continued_fraction.hpp"
#include "qmark/interval.hpp"

namespace qmark {

/// ?(x) for rational x in [0,1], summing the finite alternating series
///   ?([0; a_1..a_t]) = sum_n (-1)^(n+1) / 2^(a_1 + ... + a_n - 1).
inline Dyadic qm_rational(const Rational& x) {
    if (x.sign() < 0 || x > Rational(1)) fail(ErrorKind::DomainError, "?(x) needs 0 <= x <= 1, got " + x.str());
    if (x.is_zero()) return Dyadic(0, 0);
    if (x == Rational(1)) return Dyadic(1, 0);
    const CFWord w = cf_expand(x);
    const std::uint64_t exponent = w.sum() - 1;
    BigInt mantissa = 0;
    std::uint64_t partial = 0;
    for (std::size_t n = 0; n < w.size(); ++n) {
        partial += w[n];
        const BigInt term = pow2(exponent - (partial - 1));
        if (n % 2 == 0)
            mantissa += term;
        else
            mantissa -= term;
    }
    return Dyadic(std::move(mantissa), exponent);
}

/// ?(x) by walking down the Stern-Brocot tree and averaging the values at
/// the two parents of every mediant. Shares no code with qm_rational.
inline Dyadic qm_mediant_oracle(const Rational& x) {
    if (x.sign() < 0 || x > Rational(1)) fail(ErrorKind::DomainError, "?(x) needs 0 <= x <= 1, got " + x.str());
    Rational left(0), right(1);
    Rational q_left(0), q_right(1);
    if (x == left) return to_dyadic(q_left);
    if (x == right) return to_dyadic(q_right);
    for (;;) {
        const Rational m = mediant(left, right);
        const Rational qm = (q_left + q_right) / Rational(2);
        if (m == x) return to_dyadic(qm);
        if (x < m) {
            right = m;
            q_right = qm;
        } else {
            left = m;
            q_left = qm;
        }
    }
}

/// [s_n, s_{n+1}] (ordered) for the partial sums s_n of the series; every
/// such interval contains ?(x) because the series alternates with
/// decreasing terms. n >= 1.
inline Interval qm_partial_enclosure(const CFSpec& spec, std::size_t n) {
    if (spec.is_rational()) fail(ErrorKind::RationalInput, "enclosures need a nonempty period");
    Rational s = 0;
    Rational prev = 0;
    std::uint64_t partial = 0;
    for (std::size_t i = 1; i <= n + 1; ++i) {
        partial += spec.quotient(i);
        prev = s;
        const Rational term(1, pow2(partial - 1));
        s += (i % 2 == 1) ? term : -term;
    }
    return Interval(std::min(prev, s), std::max(prev, s));
}

/// Enclosure of ?(x) for an eventually periodic irrational x, width <= eps.
inline Interval qm_irrational(const CFSpec& spec, const Rational& eps) {
    if (spec.is_rational()) fail(ErrorKind::RationalInput, "qm_irrational needs a nonempty period");
    if (eps.sign() <= 0) fail(ErrorKind::DomainError, "eps must be positive");
    Rational s = 0;
    std::uint64_t partial = 0;
    for (std::size_t i = 1;; ++i) {
        partial += spec.quotient(i);
        const Rational term(1, pow2(partial - 1));
        const Rational next = (i % 2 == 1) ? s + term : s - term;
        // ?(x) lies between consecutive partial sums s_{i-1} and s_i once i >= 2;
        // the first term alone brackets it as [0, s_1].
        if (term <= eps) return Interval(std::min(s, next), std::max(s, next));
        s = next;
    }
}

inline constexpr unsigned kMaxSternBrocotLevel = 24;

/// F_n as an increasing list of 2^n + 1 fractions from 0/1 to 1/1.
struct SternBrocotLevel {
    unsigned n = 0;
    std::vector<Rational> points;
};

inline SternBrocotLevel stern_brocot_level(unsigned n) {
    if (n > kMaxSternBrocotLevel)
        fail(ErrorKind::LimitError, "level " + std::to_string(n) + " exceeds " + std::to_string(kMaxSternBrocotLevel));
    std::vector<Rational> pts{Rational(0), Rational(1)};
    for (unsigned level = 0; level < n; ++level) {
        std::vector<Rational> next;
        next.reserve(2 * pts.size() - 1);
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            next.push_back(pts[i]);
            next.push_back(mediant(pts[i], pts[i + 1]));
        }
        next.push_back(pts.back());
        pts = std::move(next);
    }
    return {n, std::move(pts)};
}

struct DistributionReport {
    unsigned n = 0;
    std::size_t checked = 0;
    std::vector<std::size_t> mismatches;  ///< indices j with ?(x_{j,n}) != j / 2^n
    bool holds() const { return mismatches.empty() && checked > 0; }
};

inline constexpr unsigned kMaxDistributionLevel = 20;

/// ?(x_{j,n}) = j / 2^n for every point of F_n.
inline DistributionReport distribution_check(unsigned n) {
    if (n > kMaxDistributionLevel) fail(ErrorKind::LimitError, "distribution check limited to level 20");
    const SternBrocotLevel level = stern_brocot_level(n);
    DistributionReport rep;
    rep.n = n;
    for (std::size_t j = 0; j < level.points.size(); ++j) {
        ++rep.checked;
        if (qm_rational(level.points[j]) != Dyadic(BigInt(j), n)) rep.mismatches.push_back(j);
    }
    return rep;
}

/// Result of locating (x, x + delta) in the Stern-Brocot tree.
struct FareySearch {
    unsigned n = 0;      ///< largest level with F_n disjoint from the interval
    Rational xi0;        ///< consecutive points of F_n around the interval
    Rational xi;         ///< the single point of F_{n+1} inside, xi0 (+) xi1
    Rational xi1;
};

/// Descends the tree instead of materialising F_n.
inline FareySearch farey_interval_search(const Rational& x, const Rational& delta) {
    if (delta.sign() <= 0) fail(ErrorKind::DegenerateInterval, "empty interval (delta <= 0)");
    const Rational hi = x + delta;
    if (x.sign() <= 0 || hi >= Rational(1)) fail(ErrorKind::DomainError, "need 0 < x < x + delta < 1");
    Rational left(0), right(1);
    for (unsigned n = 0;; ++n) {
        Rational m = mediant(left, right);
        if (x < m && m < hi) return {n, std::move(left), std::move(m), std::move(right)};
        if (m <= x)
            left = std::move(m);
        else
            right = std::move(m);
    }
}

/// Witnesses of the two-sided estimate
///   q_t q_{t-1} / 2^(a_1+..+a_{t+1}+z) <= (?(x+d) - ?(x)) / d
///                                     <= (z'+1)^2 q_{t'+1}^2 / 2^(a_1+..+a_{t'+1}+z'-4)
/// for x a deep convergent of an irrational.
struct SandwichReport {
    Rational x;
    Rational delta;
    bool mirrored = false;  ///< delta < 0: built on 1 - x with step |delta|
    unsigned n = 0;
    std::size_t t = 0;
    std::uint64_t z = 0;
    long long t_upper = 0;  ///< t'
    std::uint64_t z_upper = 0;  ///< z'
    std::string branch;  ///< "i1", "i2" or "ii"
    Rational xi0, xi, xi1;
    Rational lower;
    Rational quotient;
    Rational upper;
    bool holds() const { return lower <= quotient && quotient <= upper; }
};

namespace detail {

/// Word of 1 - [0; a_1..a_d].
inline CFWord mirror_word(const CFWord& w) {
    if (w.empty()) fail(ErrorKind::GuardError, "cannot mirror an empty word");
    std::vector<Quotient> v;
    if (w[0] >= 2) {
        v.push_back(1);
        v.push_back(w[0] - 1);
        v.insert(v.end(), w.begin() + 1, w.end());
    } else {
        if (w.size() < 2) fail(ErrorKind::GuardError, "word too short to mirror");
        v.push_back(w[1] + 1);
        v.insert(v.end(), w.begin() + 2, w.end());
    }
    return CFWord(std::move(v));
}

struct SandwichCore {
    FareySearch search;
    std::size_t t = 0;
    std::uint64_t z = 0;
    long long t_upper = 0;
    std::uint64_t z_upper = 0;
    std::string branch;
    Rational lower;
    Rational upper;
};

/// The construction for a positive step on the point with expansion `w`.
inline SandwichCore sandwich_core(const CFWord& w, const Rational& delta) {
    const std::size_t d = w.size();
    const Rational x = cf_value(w);
    SandwichCore out;
    out.search = farey_interval_search(x, delta);
    const FareySearch& s = out.search;

    // p[i + 1] = p_i for i = -1..d
    std::vector<BigInt> p{1, 0}, q{0, 1};
    for (Quotient a : w) {
        p.push_back(BigInt(a) * p.back() + p[p.size() - 2]);
        q.push_back(BigInt(a) * q.back() + q[q.size() - 2]);
    }
    auto P = [&](long long i) -> const BigInt& { return p[static_cast<std::size_t>(i + 1)]; };
    auto Q = [&](long long i) -> const BigInt& { return q[static_cast<std::size_t>(i + 1)]; };
    std::vector<std::uint64_t> S{0};  // S[i] = a_1 + .. + a_i
    for (Quotient a : w) S.push_back(S.back() + a);

    // The pair (xi0, xi1) is {p_t/q_t, (k p_t + p_{t-1}) / (k q_t + q_{t-1})}, 0 <= k < a_{t+1}.
    bool found = false;
    for (std::size_t tt = 0; tt < d; ++tt) {
        const long long ti = static_cast<long long>(tt);
        for (int orient = 0; orient < 2; ++orient) {
            const Rational& conv = orient == 0 ? s.xi0 : s.xi1;
            const Rational& other = orient == 0 ? s.xi1 : s.xi0;
            if (conv.num() != P(ti) || conv.den() != Q(ti)) continue;
            const BigInt diff = other.den() - Q(ti - 1);
            if (diff.sign() < 0 || diff % Q(ti) != 0) continue;
            const BigInt k = diff / Q(ti);
            if (k >= BigInt(w[tt]) || other.num() != k * P(ti) + P(ti - 1)) continue;
            out.t = tt;
            found = true;
        }
    }
    if (!found) fail(ErrorKind::GuardError, "Farey pair is not a convergent/intermediate pair of the prefix");
    const std::size_t t = out.t;
    if (t + 3 > d) fail(ErrorKind::GuardError, "Farey search reached the approximation depth; use a deeper convergent");

    // Smallest z with xi0 (+) xi^z in (x, xi) or xi1 (+) xi^z in (xi, x + delta).
    const std::uint64_t cap = 2 + std::max(w[t], w[t + 1]);
    const Rational hi = x + delta;
    bool left_hit = false;
    Rational minus, plus;
    for (std::uint64_t z = 1;; ++z) {
        if (z > cap) fail(ErrorKind::SearchCapError, "z exceeded 2 + max partial quotient in the window");
        const BigInt zb(z);
        minus = Rational(s.xi0.num() + zb * s.xi.num(), s.xi0.den() + zb * s.xi.den());
        plus = Rational(s.xi1.num() + zb * s.xi.num(), s.xi1.den() + zb * s.xi.den());
        left_hit = x < minus && minus < s.xi;
        const bool right_hit = s.xi < plus && plus < hi;
        if (left_hit || right_hit) {
            out.z = z;
            break;
        }
    }

    const long long ti = static_cast<long long>(t);
    out.lower = Rational(Q(ti) * Q(ti - 1), pow2(S[t + 1] + out.z));
    if (left_hit && out.z == 1) {
        // xi_- = p/q with q = z_* q_t + q_{t-1}; the upper estimate moves to t-1.
        out.branch = "i1";
        out.t_upper = ti - 1;
        const BigInt zs = (minus.den() - Q(ti - 1)) / Q(ti);
        out.z_upper = zs.convert_to<std::uint64_t>();
    } else {
        out.branch = left_hit ? "i2" : "ii";
        out.t_upper = ti;
        out.z_upper = out.z;
    }
    const std::size_t tu1 = static_cast<std::size_t>(out.t_upper + 1);
    const BigInt zu1(out.z_upper + 1);
    const BigInt qn = Q(out.t_upper + 1);
    // 2^(e - 4) with e possibly below 4
    const long long e = static_cast<long long>(S[tu1] + out.z_upper) - 4;
    out.upper = Rational(zu1 * zu1 * qn * qn).ldexp(-e);
    return out;
}

}  // namespace detail

/// Checks the two-sided difference-quotient estimate at x = convergent of
/// order `depth` of `spec`, with step delta (either sign).
inline SandwichReport sandwich(const CFSpec& spec, std::size_t depth, const Dyadic& delta) {
    if (spec.is_rational()) fail(ErrorKind::RationalInput, "sandwich needs an irrational (periodic) spec");
    const Rational d = delta.to_rational();
    if (d.is_zero()) fail(ErrorKind::DomainError, "delta must be nonzero");
    const CFWord w = spec.prefix(depth);
    SandwichReport rep;
    rep.x = cf_value(w);
    rep.delta = d;
    const Rational moved = rep.x + d;
    if (moved.sign() <= 0 || moved >= Rational(1)) fail(ErrorKind::DomainError, "x + delta leaves (0, 1)");
    rep.quotient = (qm_rational(moved).to_rational() - qm_rational(rep.x).to_rational()) / d;

    rep.mirrored = d.sign() < 0;
    const detail::SandwichCore core =
        rep.mirrored ? detail::sandwich_core(detail::mirror_word(w), -d) : detail::sandwich_core(w, d);
    rep.n = core.search.n;
    rep.xi0 = core.search.xi0;
    rep.xi = core.search.xi;
    rep.xi1 = core.search.xi1;
    rep.t = core.t;
    rep.z = core.z;
    rep.t_upper = core.t_upper;
    rep.z_upper = core.z_upper;
    rep.branch = core.branch;
    rep.lower = core.lower;
    rep.upper = core.upper;
    return rep;
}

}  // namespace qmark
