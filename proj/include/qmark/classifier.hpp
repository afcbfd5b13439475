#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmark/constants.hpp"
#include "qmark/continued_fraction.hpp"

namespace qmark {

enum class Verdict { Infinite, Zero, Unknown };
enum class Rule { Thm1, Thm2, Thm3, PeriodicExponent, None };

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Infinite: return "Infinite";
        case Verdict::Zero: return "Zero";
        case Verdict::Unknown: return "Unknown";
    }
    return "Unknown";
}

inline std::string rule_name(Rule r) {
    switch (r) {
        case Rule::Thm1: return "Thm1";
        case Rule::Thm2: return "Thm2";
        case Rule::Thm3: return "Thm3";
        case Rule::PeriodicExponent: return "PeriodicExponent";
        case Rule::None: return "None";
    }
    return "None";
}

struct Classification {
    Verdict verdict = Verdict::Unknown;
    Rule rule = Rule::None;
    Rational average;
    Interval margin;  ///< positive enclosure of the distance to the governing threshold
};

struct PeriodicExponent {
    CFWord period;
    Interval beta_log;  ///< ln of the dominant eigenvalue of the period matrix
    Interval P;         ///< 2 beta_log - (sum of the period) ln 2
    int sign = 0;       ///< exact sign of P
};

/// (sum of the period) / (length of the period).
inline Rational limit_average(const CFSpec& spec) {
    if (spec.is_rational()) fail(ErrorKind::RationalInput, "limit_average needs a nonempty period");
    const CFWord& p = spec.period();
    return Rational(BigInt(p.sum()), BigInt(p.size()));
}

namespace detail {

/// Runs attempt(bits) at the default precision and doubles up to the
/// maximum until it returns a value.
template <class F>
auto refine(F attempt, const char* what) {
    for (unsigned bits = default_precision();; bits = std::min(2 * bits, kMaxPrecisionBits)) {
        if (auto r = attempt(bits)) return *r;
        if (bits >= kMaxPrecisionBits) fail(ErrorKind::PrecisionError, std::string(what) + " not separable at 256 bits");
    }
}

struct PeriodMatrix {
    BigInt trace;
    int det = 1;
};

/// prod [[a,1],[1,0]] over the period.
inline PeriodMatrix period_matrix(const CFWord& period) {
    BigInt m00 = 1, m01 = 0, m10 = 0, m11 = 1;
    for (Quotient a : period) {
        const BigInt ab(a);
        BigInt n00 = m00 * ab + m01;
        BigInt n10 = m10 * ab + m11;
        m01 = std::move(m00);
        m11 = std::move(m10);
        m00 = std::move(n00);
        m10 = std::move(n10);
    }
    return {m00 + m11, period.size() % 2 == 0 ? 1 : -1};
}

/// Sign of beta^2 - 2^S with beta = (T + sqrt(T^2 - 4 det)) / 2, in integers:
/// beta^2 = (T^2 - 2 det + T sqrt(D)) / 2, so compare T sqrt(D) with R = 2^(S+1) - T^2 + 2 det.
inline int exponent_sign(const PeriodMatrix& m, std::uint64_t sum) {
    const BigInt& T = m.trace;
    const BigInt D = T * T - 4 * m.det;
    const BigInt R = pow2(sum + 1) - T * T + 2 * m.det;
    if (R.sign() < 0) return 1;
    const BigInt lhs = T * T * D;
    const BigInt rhs = R * R;
    return lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);
}

}  // namespace detail

/// Growth of q_t^2 / 2^(a_1+..+a_t) per period for a purely periodic tail.
inline PeriodicExponent periodic_exponent(const CFWord& period) {
    if (period.empty()) fail(ErrorKind::RationalInput, "periodic_exponent needs a nonempty period");
    const detail::PeriodMatrix m = detail::period_matrix(period);
    const std::uint64_t sum = period.sum();
    PeriodicExponent pe;
    pe.period = period;
    pe.sign = detail::exponent_sign(m, sum);
    const Rational trace(m.trace);
    const Rational disc = trace * trace - Rational(4 * m.det);
    auto attempt = [&](unsigned bits) -> std::optional<std::pair<Interval, Interval>> {
        const unsigned work = detail::guard_bits(bits);
        const Interval beta = ((Interval(trace) + sqrt(Interval(disc), work)) * Interval(Rational(1, 2))).rounded(work);
        const Interval bl = ln(beta, work);
        const Interval P = (Interval(2) * bl - ln2(work + 64) * Interval(Rational(BigInt(sum)))).rounded(work);
        if (pe.sign != 0 && !P.excludes_zero()) return std::nullopt;
        return std::pair{bl, P};
    };
    auto [bl, P] = detail::refine(attempt, "periodic exponent");
    pe.beta_log = bl;
    pe.P = P;
    return pe;
}

/// Decides ?'(x) for an eventually periodic x. Rules in order: average below
/// kappa_1, average above kappa_2, all quotients at most 4, sign of the
/// periodic exponent.
inline Classification classify(const CFSpec& spec) {
    if (spec.is_rational()) fail(ErrorKind::RationalInput, "classify needs a nonempty period; finite expansions are rational");
    Classification c;
    c.average = limit_average(spec);
    const Interval avg(c.average);

    // 0: below kappa_1, 1: between, 2: above kappa_2
    struct Place {
        int where;
        Interval margin;
    };
    const Place place = detail::refine(
        [&](unsigned bits) -> std::optional<Place> {
            const Kappa& k = kappas(bits);
            if (avg.certainly_less(k.kappa1)) return Place{0, k.kappa1 - avg};
            if (avg.certainly_greater(k.kappa2)) return Place{2, avg - k.kappa2};
            if (avg.certainly_greater(k.kappa1) && avg.certainly_less(k.kappa2)) return Place{1, Interval(0)};
            return std::nullopt;
        },
        "average against kappa thresholds");
    if (place.where == 0) {
        c.verdict = Verdict::Infinite;
        c.rule = Rule::Thm1;
        c.margin = place.margin;
        return c;
    }
    if (place.where == 2) {
        c.verdict = Verdict::Zero;
        c.rule = Rule::Thm2;
        c.margin = place.margin;
        return c;
    }
    bool bounded_by_4 = true;
    for (Quotient a : spec.preperiod()) bounded_by_4 = bounded_by_4 && a <= 4;
    for (Quotient a : spec.period()) bounded_by_4 = bounded_by_4 && a <= 4;
    const PeriodicExponent pe = periodic_exponent(spec.period());
    if (bounded_by_4 && pe.P.positive()) {
        c.verdict = Verdict::Infinite;
        c.rule = Rule::Thm3;
        c.margin = pe.P;
        return c;
    }
    if (pe.P.positive()) {
        c.verdict = Verdict::Infinite;
        c.rule = Rule::PeriodicExponent;
        c.margin = pe.P;
    } else if (pe.P.negative()) {
        c.verdict = Verdict::Zero;
        c.rule = Rule::PeriodicExponent;
        c.margin = -pe.P;
    }
    return c;
}

/// A generated spec together with its limit average and the certified gap
/// to the nearby threshold.
struct GeneratedSpec {
    CFSpec spec;
    Rational average;
    Interval window;  ///< xr: average - kappa_1; xpq: kappa_2 - average
};

/// m = floor(r (kappa_1 - 1 + eta)) + 1, certified.
inline std::uint64_t gen_x_r_m(std::uint64_t r, const Rational& eta) {
    if (r < 2) fail(ErrorKind::DomainError, "gen_x_r needs r >= 2");
    if (eta.sign() <= 0 || eta >= Rational(1)) fail(ErrorKind::DomainError, "gen_x_r needs 0 < eta < 1");
    const BigInt fl = detail::refine(
        [&](unsigned bits) -> std::optional<BigInt> {
            const Interval v = Interval(Rational(BigInt(r))) * (kappas(bits).kappa1 - Interval(1) + Interval(eta));
            const BigInt lo = v.lo().floor();
            if (lo != v.hi().floor()) return std::nullopt;
            return lo;
        },
        "floor of r (kappa_1 - 1 + eta)");
    return fl.convert_to<std::uint64_t>() + 1;
}

/// [0; (1 x r^2, m x r)] with m from gen_x_r_m.
inline GeneratedSpec gen_x_r(std::uint64_t r, const Rational& eta) {
    const std::uint64_t m = gen_x_r_m(r, eta);
    if (r > 10'000) fail(ErrorKind::SizeError, "gen_x_r supports r <= 10000");
    std::vector<Quotient> period(r * r, 1);
    period.insert(period.end(), r, m);
    GeneratedSpec g;
    g.spec = CFSpec::periodic(CFWord(std::move(period)));
    g.average = limit_average(g.spec);
    g.window = Interval(g.average) - kappas().kappa1;
    return g;
}

/// [0; (4 x p, 5 x q)], accepted only when (4p + 5q)/(p + q) < kappa_2.
inline GeneratedSpec gen_x_pq(std::uint64_t p, std::uint64_t q) {
    if (p < 1 || q < 1) fail(ErrorKind::DomainError, "gen_x_pq needs p, q >= 1");
    if (p + q > 1'000'000) fail(ErrorKind::SizeError, "gen_x_pq supports p + q <= 10^6");
    const Rational average(BigInt(4 * p + 5 * q), BigInt(p + q));
    const Interval window = detail::refine(
        [&](unsigned bits) -> std::optional<Interval> {
            const Interval w = kappas(bits).kappa2 - Interval(average);
            if (!w.excludes_zero()) return std::nullopt;
            return w;
        },
        "average against kappa_2");
    if (!window.positive())
        fail(ErrorKind::OutOfWindow, "average " + average.str() + " is not below kappa_2");
    std::vector<Quotient> period(p, 4);
    period.insert(period.end(), q, 5);
    GeneratedSpec g;
    g.spec = CFSpec::periodic(CFWord(std::move(period)));
    g.average = average;
    g.window = window;
    return g;
}

struct TrendRow {
    std::size_t t = 0;
    Interval lower_log;  ///< ln(q_t q_{t-1} / 2^(a_1+..+a_{t+2}+1))
    Interval upper_log;  ///< ln(q_t^2 (a_{t+1}+2)^2 16 / 2^(a_1+..+a_t))
};

inline constexpr std::size_t kMaxTrendDepth = 5000;

namespace detail {

/// ln(n 2^-e) to about 2^-50 from the top 64 bits of n.
inline Interval log_scaled(const BigInt& n, long long e) {
    constexpr unsigned kBits = 50;
    const long long top = static_cast<long long>(boost::multiprecision::msb(n));
    const long long shift = std::max<long long>(0, top - 63);
    const BigInt m = n >> shift;
    // n in [m 2^shift, (m+1) 2^shift]
    const Interval mant = shift == 0 ? Interval(Rational(m)) : Interval(Rational(m), Rational(m + 1));
    const long long k = shift - e;
    return (ln(mant, kBits) + ln2(kBits + 20) * Interval(Rational(k))).rounded(kBits);
}

}  // namespace detail

/// Certified logs of the lower and upper envelopes of ?'-difference
/// quotients along the convergents, t = 1..depth.
inline std::vector<TrendRow> trend_statistic(const CFSpec& spec, std::size_t depth) {
    if (depth == 0 || depth > kMaxTrendDepth) fail(ErrorKind::SizeError, "trend depth must be in 1..5000");
    if (depth + 2 > spec.available()) fail(ErrorKind::DepthError, "trend needs a_{depth+2}");
    std::vector<TrendRow> rows;
    rows.reserve(depth);
    BigInt q_prev = 1, q = spec.quotient(1);  // q_0, q_1
    std::vector<std::uint64_t> S(depth + 3, 0);  // S[i] = a_1 + .. + a_i
    for (std::size_t i = 1; i <= depth + 2; ++i) S[i] = S[i - 1] + spec.quotient(i);
    for (std::size_t t = 1; t <= depth; ++t) {
        TrendRow row;
        row.t = t;
        row.lower_log = detail::log_scaled(q * q_prev, static_cast<long long>(S[t + 2] + 1));
        const BigInt g = BigInt(spec.quotient(t + 1) + 2);
        row.upper_log = detail::log_scaled(q * q * g * g * 16, static_cast<long long>(S[t]));
        rows.push_back(std::move(row));
        BigInt next = BigInt(spec.quotient(t + 1)) * q + q_prev;
        q_prev = std::move(q);
        q = std::move(next);
    }
    return rows;
}

/// Change of the chosen log over the last whole period of the rows.
inline Interval trend_period_slope(const std::vector<TrendRow>& rows, std::size_t period, bool upper) {
    if (period == 0 || rows.size() <= period) fail(ErrorKind::DepthError, "need more than one period of rows");
    const TrendRow& a = rows[rows.size() - 1 - period];
    const TrendRow& b = rows.back();
    return upper ? b.upper_log - a.upper_log : b.lower_log - a.lower_log;
}

}  // namespace qmark
