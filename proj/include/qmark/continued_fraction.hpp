#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmark/rational.hpp"

namespace qmark {

using Quotient = std::uint64_t;

/// Finite word (a_1, ..., a_t) of positive partial quotients.
class CFWord {
public:
    CFWord() = default;
    CFWord(std::initializer_list<Quotient> q) : CFWord(std::vector<Quotient>(q)) {}
    explicit CFWord(std::vector<Quotient> q) : q_(std::move(q)) {
        for (Quotient a : q_)
            if (a == 0) fail(ErrorKind::DomainError, "partial quotients must be positive");
    }

    std::size_t size() const noexcept { return q_.size(); }
    bool empty() const noexcept { return q_.empty(); }
    Quotient operator[](std::size_t i) const { return q_[i]; }
    auto begin() const noexcept { return q_.begin(); }
    auto end() const noexcept { return q_.end(); }
    std::span<const Quotient> view() const noexcept { return q_; }
    const std::vector<Quotient>& values() const noexcept { return q_; }

    /// a_1 + ... + a_t
    std::uint64_t sum() const { return std::accumulate(q_.begin(), q_.end(), std::uint64_t{0}); }

    CFWord concat(const CFWord& o) const {
        std::vector<Quotient> v = q_;
        v.insert(v.end(), o.q_.begin(), o.q_.end());
        return CFWord(std::move(v));
    }

    friend bool operator==(const CFWord&, const CFWord&) = default;
    friend auto operator<=>(const CFWord&, const CFWord&) = default;

    /// "1,2,3"
    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < q_.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(q_[i]);
        }
        return s;
    }

private:
    std::vector<Quotient> q_;
};

/// Continuant k_t(a_1..a_t): k_0 = 1, k_1 = a_1, k_t = a_t k_{t-1} + k_{t-2}.
template <class Int = BigInt>
Int continuant(std::span<const Quotient> word) {
    Int prev = 0;  // k_{-1}
    Int cur = 1;   // k_0
    for (Quotient a : word) {
        Int next = Int(a) * cur + prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

template <class Int = BigInt>
Int continuant(const CFWord& w) {
    return continuant<Int>(w.view());
}

/// k(a) k(b) + k(a without its last) k(b without its first); equals k(a || b).
inline BigInt split_continuant(const CFWord& a, const CFWord& b) {
    const auto av = a.view();
    const auto bv = b.view();
    const BigInt ka_short = av.empty() ? BigInt(0) : continuant(av.first(av.size() - 1));
    const BigInt kb_short = bv.empty() ? BigInt(0) : continuant(bv.subspan(1));
    return continuant(av) * continuant(bv) + ka_short * kb_short;
}

/// k_{l,j} = k_l(j, ..., j).
inline BigInt constant_continuant(std::uint64_t l, Quotient j) {
    if (j == 0) fail(ErrorKind::DomainError, "constant quotient must be positive");
    BigInt prev = 0;
    BigInt cur = 1;
    for (std::uint64_t i = 0; i < l; ++i) {
        BigInt next = BigInt(j) * cur + prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

/// Canonical expansion of x in (0,1); the last quotient is >= 2 unless x = 1/1.
inline CFWord cf_expand(const Rational& x) {
    if (x.sign() <= 0 || x >= Rational(1)) fail(ErrorKind::DomainError, "cf_expand needs 0 < x < 1, got " + x.str());
    std::vector<Quotient> q;
    BigInt num = x.den();  // expanding 1/x
    BigInt den = x.num();
    while (den != 0) {
        BigInt a = num / den;
        if (a > BigInt(std::numeric_limits<Quotient>::max()))
            fail(ErrorKind::DomainError, "partial quotient exceeds 64 bits");
        q.push_back(a.convert_to<Quotient>());
        BigInt r = num - a * den;
        num = std::move(den);
        den = std::move(r);
    }
    return CFWord(std::move(q));
}

/// Exact value of [0; a_1, ..., a_t]; the empty word is 0.
inline Rational cf_value(const CFWord& w) {
    // p_t / q_t with p from the shifted recurrence
    BigInt p_prev = 1, p = 0;  // p_{-1}, p_0
    BigInt q_prev = 0, q = 1;  // q_{-1}, q_0
    for (Quotient a : w) {
        BigInt pn = BigInt(a) * p + p_prev;
        BigInt qn = BigInt(a) * q + q_prev;
        p_prev = std::move(p);
        p = std::move(pn);
        q_prev = std::move(q);
        q = std::move(qn);
    }
    return Rational(p, q);
}

/// Eventually periodic continued fraction [0; preperiod, (period)].
/// An empty period denotes the rational [0; preperiod].
class CFSpec {
public:
    CFSpec() = default;
    CFSpec(CFWord preperiod, CFWord period) : pre_(std::move(preperiod)), per_(std::move(period)) {}

    static CFSpec finite(CFWord w) { return {std::move(w), {}}; }
    static CFSpec periodic(CFWord period) { return {{}, std::move(period)}; }

    const CFWord& preperiod() const noexcept { return pre_; }
    const CFWord& period() const noexcept { return per_; }
    bool is_rational() const noexcept { return per_.empty(); }

    /// Number of available quotients (unbounded for irrationals).
    std::size_t available() const noexcept {
        return is_rational() ? pre_.size() : std::numeric_limits<std::size_t>::max();
    }

    /// a_i for i >= 1, unrolling the period lazily.
    Quotient quotient(std::size_t i) const {
        if (i == 0 || i > available()) fail(ErrorKind::DepthError, "quotient index out of range");
        if (i <= pre_.size()) return pre_[i - 1];
        return per_[(i - 1 - pre_.size()) % per_.size()];
    }

    /// (a_1, ..., a_depth)
    CFWord prefix(std::size_t depth) const {
        if (depth > available())
            fail(ErrorKind::DepthError, "depth " + std::to_string(depth) + " exceeds the finite expansion");
        std::vector<Quotient> v;
        v.reserve(depth);
        for (std::size_t i = 1; i <= depth; ++i) v.push_back(quotient(i));
        return CFWord(std::move(v));
    }

    friend bool operator==(const CFSpec&, const CFSpec&) = default;

    /// "[0; a1, a2, (p1, p2)]"
    std::string str() const {
        std::string s = "[0; ";
        for (std::size_t i = 0; i < pre_.size(); ++i) {
            if (i) s += ", ";
            s += std::to_string(pre_[i]);
        }
        if (!per_.empty()) {
            if (!pre_.empty()) s += ", ";
            s += "(";
            for (std::size_t i = 0; i < per_.size(); ++i) {
                if (i) s += ", ";
                s += std::to_string(per_[i]);
            }
            s += ")";
        }
        return s + "]";
    }

    static CFSpec parse(std::string_view text);

private:
    CFWord pre_;
    CFWord per_;
};

inline CFSpec CFSpec::parse(std::string_view text) {
    std::string s;
    for (char c : text)
        if (c != ' ' && c != '\t' && c != '\n' && c != '\r') s += c;
    auto bad = [&](const std::string& why) { fail(ErrorKind::ParseError, "bad continued fraction '" + std::string(text) + "': " + why); };
    if (s.size() < 4 || s.front() != '[' || s.back() != ']') bad("expected [0; ...]");
    s = s.substr(1, s.size() - 2);
    if (s.rfind("0;", 0) != 0) bad("integer part must be 0");
    s = s.substr(2);

    std::vector<Quotient> pre, per;
    bool in_period = false, period_closed = false;
    std::string tok;
    auto flush = [&] {
        if (tok.empty()) return;
        if (period_closed) bad("quotients after the period");
        const BigInt v = detail::parse_integer(tok);
        if (v <= 0 || v > BigInt(std::numeric_limits<Quotient>::max())) bad("quotients must be positive 64-bit integers");
        (in_period ? per : pre).push_back(v.convert_to<Quotient>());
        tok.clear();
    };
    for (char c : s) {
        if (c == ',') {
            flush();
        } else if (c == '(') {
            if (in_period || period_closed || !tok.empty()) bad("misplaced '('");
            in_period = true;
        } else if (c == ')') {
            if (!in_period) bad("misplaced ')'");
            flush();
            in_period = false;
            period_closed = true;
            if (per.empty()) bad("empty period");
        } else {
            tok += c;
        }
    }
    if (in_period) bad("unterminated period");
    flush();
    return CFSpec(CFWord(std::move(pre)), CFWord(std::move(per)));
}

/// p_t / q_t of order t.
struct ConvergentPair {
    BigInt p;
    BigInt q;
    std::size_t t = 0;
};

/// Convergents of orders 1..depth.
inline std::vector<ConvergentPair> convergents(const CFSpec& spec, std::size_t depth) {
    if (depth == 0) fail(ErrorKind::DepthError, "depth must be positive");
    if (depth > spec.available())
        fail(ErrorKind::DepthError, "depth " + std::to_string(depth) + " exceeds the finite expansion");
    std::vector<ConvergentPair> out;
    out.reserve(depth);
    BigInt p_prev = 1, p = 0, q_prev = 0, q = 1;
    for (std::size_t t = 1; t <= depth; ++t) {
        const BigInt a = spec.quotient(t);
        BigInt pn = a * p + p_prev;
        BigInt qn = a * q + q_prev;
        p_prev = std::move(p);
        p = std::move(pn);
        q_prev = std::move(q);
        q = std::move(qn);
        out.push_back({p, q, t});
    }
    return out;
}

/// Both one-step moves of a pair of quotients along a fixed sum a_i + a_j.
struct ReplacementFloor {
    BigInt value;       ///< min(lowered, raised)
    BigInt lowered;     ///< continuant with a_i - 1, a_j + 1
    BigInt raised;      ///< continuant with a_i + 1, a_j - 1
    bool lower_first;   ///< true when the minimum is the lowered branch (ties included)
};

/// The continuant is concave along a_i + a_j = const, so it never drops
/// below the smaller of the two neighbouring moves. Positions are zero-based.
inline ReplacementFloor replacement_floor(const CFWord& w, std::size_t i, std::size_t j) {
    if (i == j || i >= w.size() || j >= w.size()) fail(ErrorKind::PreconditionError, "need two distinct positions inside the word");
    if (w[i] <= 1 || w[j] <= 1) fail(ErrorKind::PreconditionError, "both quotients must exceed 1");
    std::vector<Quotient> lo = w.values(), hi = w.values();
    --lo[i];
    ++lo[j];
    ++hi[i];
    --hi[j];
    ReplacementFloor r;
    r.lowered = continuant<BigInt>(std::span<const Quotient>(lo));
    r.raised = continuant<BigInt>(std::span<const Quotient>(hi));
    r.lower_first = r.lowered <= r.raised;
    r.value = r.lower_first ? r.lowered : r.raised;
    return r;
}

}  // namespace qmark
