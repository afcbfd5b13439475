#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "qmark/error.hpp"

namespace qmark {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt pow2(std::uint64_t k) {
    BigInt r = 1;
    r <<= static_cast<unsigned>(k);
    return r;
}

/// Exact fraction num/den, always reduced with den >= 1.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long v) : num_(v), den_(1) {}  // NOLINT: implicit integer promotion is intended
    Rational(BigInt v) : num_(std::move(v)), den_(1) {}  // NOLINT
    Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_ == 0) fail(ErrorKind::DomainError, "zero denominator");
        normalize();
    }

    const BigInt& num() const noexcept { return num_; }
    const BigInt& den() const noexcept { return den_; }

    int sign() const noexcept { return num_.sign(); }
    bool is_zero() const noexcept { return num_ == 0; }
    bool is_integer() const noexcept { return den_ == 1; }

    Rational operator-() const { return from_reduced(-num_, den_); }

    Rational& operator+=(const Rational& o) {
        if (den_ == o.den_) {
            num_ += o.num_;
        } else {
            num_ = num_ * o.den_ + o.num_ * den_;
            den_ *= o.den_;
        }
        normalize();
        return *this;
    }
    Rational& operator-=(const Rational& o) { return *this += -o; }
    Rational& operator*=(const Rational& o) {
        num_ *= o.num_;
        den_ *= o.den_;
        normalize();
        return *this;
    }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) fail(ErrorKind::DomainError, "division by zero");
        BigInt n = num_ * o.den_;
        BigInt d = den_ * o.num_;
        num_ = std::move(n);
        den_ = std::move(d);
        normalize();
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const BigInt l = a.num_ * b.den_;
        const BigInt r = b.num_ * a.den_;
        if (l < r) return std::strong_ordering::less;
        if (l > r) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    /// Largest integer <= value.
    BigInt floor() const {
        BigInt q = num_ / den_;  // truncates toward zero
        if (num_.sign() < 0 && q * den_ != num_) --q;
        return q;
    }
    BigInt ceil() const { return -(-*this).floor(); }

    Rational abs() const { return sign() < 0 ? -*this : *this; }

    Rational ldexp(long long k) const {
        if (k >= 0) return Rational(num_ << static_cast<unsigned>(k), den_);
        return Rational(num_, den_ << static_cast<unsigned>(-k));
    }

    double to_double() const {
        // Scale into a comfortable range first so huge operands do not overflow.
        const long long nb = num_ == 0 ? 0 : static_cast<long long>(boost::multiprecision::msb(abs_big(num_)));
        const long long db = static_cast<long long>(boost::multiprecision::msb(den_));
        const long long shift = nb - db;
        Rational scaled = ldexp(-shift);
        const double v = scaled.num_.convert_to<double>() / scaled.den_.convert_to<double>();
        return std::ldexp(v, static_cast<int>(shift));
    }

    std::string str() const {
        if (den_ == 1) return num_.str();
        return num_.str() + "/" + den_.str();
    }

    /// Parses "p/q" or "p" with an optional sign.
    static Rational parse(std::string_view text);

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    static Rational from_reduced(BigInt n, BigInt d) {
        Rational r;
        r.num_ = std::move(n);
        r.den_ = std::move(d);
        return r;
    }
    static BigInt abs_big(const BigInt& v) { return v.sign() < 0 ? BigInt(-v) : v; }

    void normalize() {
        if (den_.sign() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_ == 0) {
            den_ = 1;
            return;
        }
        BigInt g = boost::multiprecision::gcd(num_, den_);
        if (g != 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    BigInt num_;
    BigInt den_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

inline BigInt parse_integer(std::string_view s) {
    s = trim(s);
    bool neg = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty()) fail(ErrorKind::ParseError, "empty integer");
    BigInt v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') fail(ErrorKind::ParseError, "bad digit in integer '" + std::string(s) + "'");
        v = v * 10 + (c - '0');
    }
    return neg ? BigInt(-v) : v;
}

}  // namespace detail

inline Rational Rational::parse(std::string_view text) {
    text = detail::trim(text);
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(detail::parse_integer(text));
    BigInt n = detail::parse_integer(text.substr(0, slash));
    BigInt d = detail::parse_integer(text.substr(slash + 1));
    if (d == 0) fail(ErrorKind::ParseError, "zero denominator");
    return Rational(std::move(n), std::move(d));
}

/// The mediant (a.num + b.num) / (a.den + b.den) of two reduced fractions.
inline Rational mediant(const Rational& a, const Rational& b) {
    return Rational(a.num() + b.num(), a.den() + b.den());
}

/// |a.num * b.den - b.num * a.den|; equals 1 exactly for Farey neighbours.
inline BigInt farey_determinant(const Rational& a, const Rational& b) {
    BigInt d = a.num() * b.den() - b.num() * a.den();
    return d.sign() < 0 ? BigInt(-d) : d;
}

/// Exact value mantissa / 2^exponent, stored in lowest terms.
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(BigInt mantissa, std::uint64_t exponent) : mantissa_(std::move(mantissa)), exponent_(exponent) {
        normalize();
    }

    const BigInt& mantissa() const noexcept { return mantissa_; }
    std::uint64_t exponent() const noexcept { return exponent_; }

    Rational to_rational() const { return Rational(mantissa_, pow2(exponent_)); }

    friend bool operator==(const Dyadic&, const Dyadic&) = default;
    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
        return a.to_rational() <=> b.to_rational();
    }

    /// "m/2^k"; plain "m" when k = 0.
    std::string str() const {
        if (exponent_ == 0) return mantissa_.str();
        return mantissa_.str() + "/2^" + std::to_string(exponent_);
    }

    /// Binary positional expansion, e.g. 3/8 -> "0.011". Always terminates.
    std::string binary() const {
        const bool neg = mantissa_.sign() < 0;
        BigInt m = neg ? BigInt(-mantissa_) : mantissa_;
        const BigInt whole = m >> static_cast<unsigned>(exponent_);
        BigInt frac = m - (whole << static_cast<unsigned>(exponent_));
        std::string out = (neg ? "-" : "") + whole.str();
        if (exponent_ == 0) return out;
        out += '.';
        for (std::uint64_t i = exponent_; i-- > 0;) out += boost::multiprecision::bit_test(frac, static_cast<unsigned>(i)) ? '1' : '0';
        return out;
    }

    /// Parses "m/2^k", "m/q" with q a power of two, or an integer.
    static Dyadic parse(std::string_view text);

private:
    void normalize() {
        if (mantissa_ == 0) {
            exponent_ = 0;
            return;
        }
        const BigInt mag = mantissa_.sign() < 0 ? BigInt(-mantissa_) : mantissa_;
        const std::uint64_t tz = std::min<std::uint64_t>(boost::multiprecision::lsb(mag), exponent_);
        if (tz > 0) {
            mantissa_ >>= static_cast<unsigned>(tz);  // arithmetic shift is exact: tz low bits are zero
            exponent_ -= tz;
        }
    }

    BigInt mantissa_ = 0;
    std::uint64_t exponent_ = 0;
};

/// Converts r to a dyadic; throws NotDyadic unless den is a power of two.
inline Dyadic to_dyadic(const Rational& r) {
    const BigInt& d = r.den();
    const unsigned k = static_cast<unsigned>(boost::multiprecision::msb(d));
    if (d != pow2(k)) fail(ErrorKind::NotDyadic, r.str() + " has a non power-of-two denominator");
    return Dyadic(r.num(), k);
}

inline Dyadic Dyadic::parse(std::string_view text) {
    text = detail::trim(text);
    const auto caret = text.find("/2^");
    if (caret != std::string_view::npos) {
        BigInt m = detail::parse_integer(text.substr(0, caret));
        BigInt k = detail::parse_integer(text.substr(caret + 3));
        if (k.sign() < 0 || k > 1'000'000) fail(ErrorKind::ParseError, "bad dyadic exponent");
        return Dyadic(std::move(m), k.convert_to<std::uint64_t>());
    }
    return to_dyadic(Rational::parse(text));
}

}  // namespace qmark
