#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

#include "qmark/rational.hpp"

namespace qmark {

/// Closed interval [lo, hi] with exact rational endpoints.
///
/// Arithmetic is exact; callers bound endpoint growth with rounded(), which
/// moves lo down and hi up onto the grid 2^-bits so enclosure is preserved.
class Interval {
public:
    Interval() = default;
    Interval(Rational point) : lo_(point), hi_(std::move(point)) {}  // NOLINT
    Interval(long long point) : Interval(Rational(point)) {}  // NOLINT
    Interval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (hi_ < lo_) fail(ErrorKind::DomainError, "interval with lo > hi");
    }

    const Rational& lo() const noexcept { return lo_; }
    const Rational& hi() const noexcept { return hi_; }
    Rational width() const { return hi_ - lo_; }
    Rational mid() const { return (lo_ + hi_) / Rational(2); }

    bool contains(const Rational& v) const { return lo_ <= v && v <= hi_; }
    bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool intersects(const Interval& o) const { return !(hi_ < o.lo_ || o.hi_ < lo_); }
    bool positive() const { return lo_.sign() > 0; }
    bool negative() const { return hi_.sign() < 0; }
    bool excludes_zero() const { return positive() || negative(); }

    /// Certified strict comparisons; false when the enclosures overlap.
    bool certainly_less(const Interval& o) const { return hi_ < o.lo_; }
    bool certainly_greater(const Interval& o) const { return lo_ > o.hi_; }

    Interval operator-() const { return Interval(-hi_, -lo_); }

    friend Interval operator+(const Interval& a, const Interval& b) { return {a.lo_ + b.lo_, a.hi_ + b.hi_}; }
    friend Interval operator-(const Interval& a, const Interval& b) { return {a.lo_ - b.hi_, a.hi_ - b.lo_}; }
    friend Interval operator*(const Interval& a, const Interval& b) {
        Rational c[4] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
        return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
    }
    friend Interval operator/(const Interval& a, const Interval& b) {
        if (!b.excludes_zero()) fail(ErrorKind::PrecisionError, "interval division by an enclosure of zero");
        return a * Interval(Rational(1) / b.hi_, Rational(1) / b.lo_);
    }

    Interval& operator+=(const Interval& o) { return *this = *this + o; }
    Interval& operator-=(const Interval& o) { return *this = *this - o; }
    Interval& operator*=(const Interval& o) { return *this = *this * o; }

    /// Outward rounding onto multiples of 2^-bits.
    Interval rounded(unsigned bits) const {
        return {Rational(lo_.ldexp(bits).floor(), pow2(bits)), Rational(hi_.ldexp(bits).ceil(), pow2(bits))};
    }

    /// Smallest interval containing both.
    Interval hull(const Interval& o) const { return {std::min(lo_, o.lo_), std::max(hi_, o.hi_)}; }

    double mid_double() const { return mid().to_double(); }

    /// Decimal rendering of the midpoint with `digits` fractional digits.
    std::string decimal(unsigned digits) const { return to_decimal(mid(), digits); }

    static std::string to_decimal(const Rational& v, unsigned digits) {
        const bool neg = v.sign() < 0;
        const Rational a = v.abs();
        BigInt scale = 1;
        for (unsigned i = 0; i < digits; ++i) scale *= 10;
        // round half up on the magnitude
        BigInt scaled = (a * Rational(scale) + Rational(1, 2)).floor();
        BigInt whole = scaled / scale;
        BigInt frac = scaled % scale;
        std::string f = frac.str();
        if (f.size() < digits) f.insert(0, digits - f.size(), '0');
        std::string out = (neg && scaled != 0 ? "-" : "") + whole.str();
        if (digits > 0) out += "." + f;
        return out;
    }

private:
    Rational lo_;
    Rational hi_;
};

/// Integer power by repeated squaring with rounding after every product.
inline Interval pow(const Interval& base, unsigned exponent, unsigned bits) {
    Interval result(1);
    Interval b = base;
    while (exponent > 0) {
        if (exponent & 1U) result = (result * b).rounded(bits);
        exponent >>= 1U;
        if (exponent > 0) b = (b * b).rounded(bits);
    }
    return result;
}

namespace detail {

inline BigInt isqrt(const BigInt& v) { return boost::multiprecision::sqrt(v); }

/// [floor(sqrt(x) 2^b), ceil(...)] / 2^b for a nonnegative rational.
inline Interval sqrt_point(const Rational& x, unsigned bits) {
    if (x.sign() < 0) fail(ErrorKind::DomainError, "sqrt of a negative number");
    // sqrt(n/d) = sqrt(n d) / d
    const BigInt radicand = x.num() * x.den() << (2 * bits);
    const BigInt s = isqrt(radicand);
    const BigInt denom = x.den() << bits;
    Rational lo(s, denom);
    Rational hi = s * s == radicand ? lo : Rational(s + 1, denom);
    return Interval(std::move(lo), std::move(hi)).rounded(bits);
}

/// atanh(u) = sum u^(2i+1)/(2i+1) for |u| <= 1/5, with a certified tail.
inline Interval atanh_small(const Rational& u, unsigned bits) {
    const unsigned work = bits + 16;
    const Interval u2 = (Interval(u) * Interval(u)).rounded(work + 8);
    Interval power = Interval(u).rounded(work + 8);
    Interval sum(0);
    const Rational threshold = Rational(1).ldexp(-static_cast<long long>(work) - 2);
    for (unsigned i = 0;; ++i) {
        const Interval term = (power * Interval(Rational(1, 2 * i + 1))).rounded(work + 8);
        sum = (sum + term).rounded(work + 8);
        power = (power * u2).rounded(work + 8);
        // |remaining tail| <= |u|^(2i+3) / (1 - u^2) <= (13/12) |power| for |u| <= 1/5 + slack
        const Rational bound = std::max(power.lo().abs(), power.hi().abs()) * Rational(13, 12);
        if (bound < threshold) {
            return Interval(sum.lo() - bound, sum.hi() + bound).rounded(work);
        }
    }
}

}  // namespace detail

/// Enclosure of sqrt over an interval with nonnegative lo.
inline Interval sqrt(const Interval& x, unsigned bits) {
    const Interval a = detail::sqrt_point(x.lo(), bits);
    const Interval b = detail::sqrt_point(x.hi(), bits);
    return {a.lo(), b.hi()};
}

/// Enclosure of ln 2 = 2 atanh(1/3); |u| = 1/3 needs its own tail constant.
inline Interval ln2(unsigned bits) {
    const unsigned work = bits + 16;
    const Rational u(1, 3);
    const Rational u2 = u * u;
    Rational power = u;
    Rational sum = 0;
    for (unsigned i = 0;; ++i) {
        sum += power / Rational(2 * i + 1);
        power *= u2;
        // tail <= power * 9/8
        const Rational bound = power * Rational(9, 8);
        if (bound < Rational(1).ldexp(-static_cast<long long>(work))) {
            return (Interval(sum, sum + bound) * Interval(2)).rounded(work);
        }
    }
}

/// Enclosure of ln x for a positive rational x.
inline Interval ln(const Rational& x, unsigned bits) {
    if (x.sign() <= 0) fail(ErrorKind::DomainError, "ln of a nonpositive number");
    const unsigned work = bits + 16;
    // x = y * 2^k with y in [2/3, 4/3]
    long long k = static_cast<long long>(boost::multiprecision::msb(x.num())) -
                  static_cast<long long>(boost::multiprecision::msb(x.den()));
    Rational y = x.ldexp(-k);
    while (y > Rational(4, 3)) {
        y = y.ldexp(-1);
        ++k;
    }
    while (y < Rational(2, 3)) {
        y = y.ldexp(1);
        --k;
    }
    // Round y outward to keep the series operands short; ln is monotone so
    // the hull of the endpoint enclosures still contains ln y.
    const Interval yr = Interval(y).rounded(work + 4);
    auto ln_of = [&](const Rational& v) {
        const Rational u = (v - Rational(1)) / (v + Rational(1));
        return detail::atanh_small(u, work) * Interval(2);
    };
    Interval lny = ln_of(yr.lo()).hull(ln_of(yr.hi()));
    const Interval lnk = ln2(work + 8 + static_cast<unsigned>(boost::multiprecision::msb(BigInt(k < 0 ? -k : k) + 1))) *
                         Interval(Rational(k));
    return (lny + lnk).rounded(work);
}

/// Enclosure of ln over an interval with positive lo.
inline Interval ln(const Interval& x, unsigned bits) {
    return {ln(x.lo(), bits).lo(), ln(x.hi(), bits).hi()};
}

/// Enclosure of e = sum 1/k!.
inline Interval euler_e(unsigned bits) {
    const unsigned work = bits + 16;
    Rational sum = 0;
    Rational term = 1;
    for (unsigned k = 1;; ++k) {
        sum += term;
        term /= Rational(k);
        // remaining tail sum_{m>=k} 1/m! <= 2/k!
        const Rational bound = term * Rational(2);
        if (bound < Rational(1).ldexp(-static_cast<long long>(work))) {
            return Interval(sum, sum + bound).rounded(work);
        }
    }
}

}  // namespace qmark
