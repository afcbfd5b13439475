#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qmark/constants.hpp"
#include "qmark/continued_fraction.hpp"

namespace qmark {

using u128 = unsigned __int128;

/// Digit-count vector (r_1, ..., r_n): r_j quotients equal to j.
class Profile {
public:
    Profile() = default;
    Profile(std::initializer_list<std::uint64_t> r) : Profile(std::vector<std::uint64_t>(r)) {}
    explicit Profile(std::vector<std::uint64_t> r) : r_(std::move(r)) {
        while (!r_.empty() && r_.back() == 0) r_.pop_back();
    }

    /// Profile of a word.
    static Profile of(const CFWord& w) {
        std::vector<std::uint64_t> r;
        for (Quotient a : w) {
            if (r.size() < a) r.resize(a, 0);
            ++r[a - 1];
        }
        return Profile(std::move(r));
    }

    /// Parses "2,1".
    static Profile parse(std::string_view text) {
        std::vector<std::uint64_t> r;
        std::string tok;
        auto flush = [&] {
            const BigInt v = detail::parse_integer(tok);
            if (v.sign() < 0 || v > 1'000'000) fail(ErrorKind::ParseError, "bad profile entry");
            r.push_back(v.convert_to<std::uint64_t>());
            tok.clear();
        };
        for (char c : text) {
            if (c == ',') flush();
            else if (c != ' ') tok += c;
        }
        flush();
        return Profile(std::move(r));
    }

    std::size_t n() const noexcept { return r_.size(); }
    std::uint64_t t() const {
        std::uint64_t s = 0;
        for (auto v : r_) s += v;
        return s;
    }
    /// r_j for j >= 1; zero beyond n.
    std::uint64_t r(std::size_t j) const { return j >= 1 && j <= r_.size() ? r_[j - 1] : 0; }
    const std::vector<std::uint64_t>& counts() const noexcept { return r_; }

    /// (1,..,1, 2,..,2, ..., n,..,n)
    CFWord sorted_word() const {
        std::vector<Quotient> v;
        for (std::size_t j = 0; j < r_.size(); ++j) v.insert(v.end(), r_[j], j + 1);
        return CFWord(std::move(v));
    }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < r_.size(); ++i) s += (i ? "," : "") + std::to_string(r_[i]);
        return s;
    }

    friend bool operator==(const Profile&, const Profile&) = default;

private:
    std::vector<std::uint64_t> r_;
};

inline constexpr std::uint64_t kMaxBruteLength = 10;

struct MuResult {
    BigInt max;
    CFWord witness;  ///< lexicographically smallest maximiser
    std::uint64_t arrangements = 0;
};

namespace detail {

inline void require_brute_size(const Profile& p) {
    if (p.t() == 0) fail(ErrorKind::SizeError, "profile must contain at least one quotient");
    if (p.t() > kMaxBruteLength) fail(ErrorKind::SizeError, "t = " + std::to_string(p.t()) + " exceeds the factorial guard 10");
    if (p.n() > 1000) fail(ErrorKind::SizeError, "quotients above 1000 are not supported by the brute force");
}

/// Max continuant over all distinct arrangements of `v` (sorted ascending
/// on entry), keeping `head` fixed in front.
inline MuResult max_over_arrangements(std::vector<Quotient> v, const std::vector<Quotient>& head) {
    MuResult res;
    u128 best = 0;
    bool first = true;
    std::vector<Quotient> word(head);
    word.resize(head.size() + v.size());
    do {
        std::copy(v.begin(), v.end(), word.begin() + static_cast<std::ptrdiff_t>(head.size()));
        const u128 k = continuant<u128>(std::span<const Quotient>(word));
        ++res.arrangements;
        if (first || k > best) {  // strict: earlier (smaller) words win ties
            best = k;
            res.witness = CFWord(word);
            first = false;
        }
    } while (std::next_permutation(v.begin(), v.end()));
    // u128 -> BigInt
    res.max = BigInt(static_cast<std::uint64_t>(best >> 64));
    res.max <<= 64;
    res.max += static_cast<std::uint64_t>(best);
    return res;
}

inline BigInt to_big(u128 v) {
    BigInt r(static_cast<std::uint64_t>(v >> 64));
    r <<= 64;
    r += static_cast<std::uint64_t>(v);
    return r;
}

}  // namespace detail

/// mu_n(r): the largest continuant among all words with profile r.
inline MuResult mu_brute(const Profile& p) {
    detail::require_brute_size(p);
    const CFWord sorted = p.sorted_word();
    return detail::max_over_arrangements(sorted.values(), {});
}

/// k[r_1..r_n]: continuant of the ascending-block word.
inline BigInt k_bracket(const Profile& p) { return continuant(p.sorted_word()); }

struct KanReport {
    Profile profile;
    BigInt max_v;        ///< max over arrangements starting with 1
    BigInt bracket;      ///< k[r]
    CFWord witness;
    bool holds = false;
};

/// Max over arrangements with a_1 = 1 against k[r].
inline KanReport kan_check(const Profile& p) {
    detail::require_brute_size(p);
    if (p.r(1) == 0) fail(ErrorKind::PreconditionError, "Kan's lemma needs r_1 >= 1");
    std::vector<Quotient> rest = p.sorted_word().values();
    rest.erase(rest.begin());  // drop one leading 1
    const MuResult m = detail::max_over_arrangements(std::move(rest), {1});
    KanReport rep;
    rep.profile = p;
    rep.max_v = m.max;
    rep.bracket = k_bracket(p);
    rep.witness = m.witness;
    rep.holds = rep.max_v == rep.bracket;
    return rep;
}

/// Calls fn for every profile with digits 1..n_max, 1 <= t <= t_max.
inline void for_each_profile(std::size_t n_max, std::uint64_t t_max, const std::function<void(const Profile&)>& fn) {
    std::vector<std::uint64_t> r(n_max, 0);
    std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t j, std::uint64_t left) {
        if (j == n_max) {
            if (left != t_max) fn(Profile(r));
            return;
        }
        for (std::uint64_t v = 0; v <= left; ++v) {
            r[j] = v;
            rec(j + 1, left - v);
        }
        r[j] = 0;
    };
    rec(0, t_max);
}

struct PrtReport {
    Profile profile;
    BigInt mu;
    Interval bound;          ///< lambda_1 e prod lambda_j^r_j
    bool holds = false;      ///< mu < bound.lo
    BigInt bracket;
    Rational prod_bound;     ///< prod k_{r_j,j} prod_{j<n} (1 + 1/(j(j+1)))
    bool prod_holds = false; ///< k[r] <= prod_bound
};

inline PrtReport prt_bound(const Profile& p, unsigned bits = default_precision()) {
    detail::require_brute_size(p);
    PrtReport rep;
    rep.profile = p;
    rep.mu = mu_brute(p).max;
    const unsigned work = detail::guard_bits(bits);
    Interval bound = (spectral(1, bits).lambda * euler_e(work)).rounded(work);
    Rational prod = 1;
    for (std::size_t j = 1; j <= p.n(); ++j) {
        if (p.r(j) > 0) bound = (bound * pow(spectral(j, bits).lambda, static_cast<unsigned>(p.r(j)), work)).rounded(work);
        prod *= Rational(constant_continuant(p.r(j), j));
    }
    for (std::size_t j = 1; j + 1 <= p.n(); ++j) {
        const long long jj = static_cast<long long>(j);
        prod *= Rational(1) + Rational(1, jj * (jj + 1));
    }
    rep.bound = bound;
    rep.holds = Rational(rep.mu) < bound.lo();
    rep.bracket = k_bracket(p);
    rep.prod_bound = prod;
    rep.prod_holds = Rational(rep.bracket) <= prod;
    return rep;
}

/// Vertex of {r >= 0, sum r = 1, sum (j - omega) r_j >= 0}.
struct PolytopeVertex {
    enum class Kind { Pure, Mixed };
    Kind kind = Kind::Pure;
    Quotient i = 0;         ///< Mixed only, 1..4
    Quotient j = 0;         ///< >= 5
    Interval weight_i;      ///< (j - omega)/(j - i); zero for Pure
    Interval weight_j;      ///< (omega - i)/(j - i); one for Pure
    Interval value;         ///< sum r_j L_j at the vertex

    std::string str() const {
        return kind == Kind::Pure ? "e_" + std::to_string(j) : "e_{" + std::to_string(i) + "," + std::to_string(j) + "}";
    }
};

struct OmegaVertexResult {
    std::size_t n = 0;
    Rational eta;
    Interval omega;
    Interval max;                 ///< enclosure of the maximum over vertices
    PolytopeVertex argvertex;
    bool unique = false;          ///< argvertex certainly beats every other vertex
    Interval expected;            ///< eta (L_5 - L_4)
    std::vector<PolytopeVertex> vertices;
    bool matches_expected() const { return max.intersects(expected); }
};

/// Maximum of sum r_j L_j over the t = 1 slice of the polytope with
/// omega = kappa_2 + eta, evaluated at every vertex.
inline OmegaVertexResult omega_max_vertex(std::size_t n, const Rational& eta, unsigned bits = default_precision()) {
    if (n < 5) fail(ErrorKind::DomainError, "omega_max_vertex needs n >= 5");
    if (eta.sign() < 0 || eta >= Rational(1, 2)) fail(ErrorKind::DomainError, "eta must lie in [0, 1/2)");
    const unsigned work = detail::guard_bits(bits);
    OmegaVertexResult res;
    res.n = n;
    res.eta = eta;
    res.omega = kappas(bits).kappa2 + Interval(eta);
    for (Quotient j = 5; j <= n; ++j) {
        PolytopeVertex v;
        v.kind = PolytopeVertex::Kind::Pure;
        v.j = j;
        v.weight_i = Interval(0);
        v.weight_j = Interval(1);
        v.value = L(j, bits);
        res.vertices.push_back(v);
    }
    for (Quotient i = 1; i <= 4; ++i) {
        for (Quotient j = 5; j <= n; ++j) {
            PolytopeVertex v;
            v.kind = PolytopeVertex::Kind::Mixed;
            v.i = i;
            v.j = j;
            const Interval span(Rational(static_cast<long long>(j - i)));
            v.weight_j = ((res.omega - Interval(static_cast<long long>(i))) / span).rounded(work);
            v.weight_i = ((Interval(static_cast<long long>(j)) - res.omega) / span).rounded(work);
            // Expanded so that omega enters once: (omega (L_j - L_i) + j L_i - i L_j) / (j - i).
            const Interval& li = L(i, bits);
            const Interval& lj = L(j, bits);
            v.value = ((res.omega * (lj - li) + Interval(static_cast<long long>(j)) * li -
                        Interval(static_cast<long long>(i)) * lj) /
                       span)
                          .rounded(work);
            res.vertices.push_back(v);
        }
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < res.vertices.size(); ++k)
        if (res.vertices[k].value.hi() > res.vertices[best].value.hi()) best = k;
    Rational lo = res.vertices[0].value.lo();
    for (const auto& v : res.vertices) lo = std::max(lo, v.value.lo());
    res.max = Interval(lo, res.vertices[best].value.hi());
    res.argvertex = res.vertices[best];
    res.unique = true;
    for (std::size_t k = 0; k < res.vertices.size(); ++k)
        if (k != best && !res.vertices[best].value.certainly_greater(res.vertices[k].value)) res.unique = false;
    res.expected = (Interval(eta) * (L(5, bits) - L(4, bits))).rounded(work);
    return res;
}

/// Feasibility of the grid point r = m / D (sum m = t D) for the constraint
/// sum (j - omega) r_j >= 0, decided exactly for a rational omega.
inline bool omega_feasible(const std::vector<std::uint64_t>& m, const Rational& omega) {
    std::uint64_t weighted = 0, total = 0;
    for (std::size_t j = 0; j < m.size(); ++j) {
        weighted += (j + 1) * m[j];
        total += m[j];
    }
    return Rational(static_cast<long long>(weighted)) >= omega * Rational(static_cast<long long>(total));
}

struct OmegaGridResult {
    std::size_t n = 0;
    std::uint64_t t = 0;
    std::uint64_t denominator = 0;
    std::uint64_t points = 0;      ///< grid points enumerated
    std::uint64_t feasible = 0;
    std::optional<Interval> max;   ///< empty when no grid point is feasible
    std::vector<std::uint64_t> argpoint;  ///< numerators m_j of a maximiser
};

inline constexpr std::size_t kMaxGridN = 8;
inline constexpr std::uint64_t kMaxGridDenominator = 24;

/// Brute force over r_j = m_j / D, m_j >= 0, sum r_j = t. Independent of
/// the vertex formula. Points whose feasibility cannot be separated from the
/// enclosure of omega are kept, so the result can only overestimate.
inline OmegaGridResult omega_max_grid(std::size_t n, std::uint64_t t, const Rational& eta, std::uint64_t denominator,
                                      unsigned bits = default_precision()) {
    if (n < 1 || n > kMaxGridN) fail(ErrorKind::SizeError, "grid oracle needs 1 <= n <= 8");
    if (denominator < 1 || denominator > kMaxGridDenominator) fail(ErrorKind::SizeError, "grid denominator must be in 1..24");
    if (t < 1 || t > 2) fail(ErrorKind::SizeError, "grid oracle supports t in {1, 2}");
    if (eta.sign() < 0) fail(ErrorKind::DomainError, "eta must be nonnegative");
    const Interval omega = kappas(bits).kappa2 + Interval(eta);
    const std::uint64_t total = t * denominator;
    // sum j m_j >= omega_lo * total  <=>  sum j m_j >= ceil(omega_lo * total)
    const BigInt need_big = (omega.lo() * Rational(static_cast<long long>(total))).ceil();
    const std::uint64_t need = need_big.convert_to<std::uint64_t>();

    // L_j enclosures in fixed point with 100 fractional bits.
    constexpr unsigned kScale = 100;
    std::vector<__int128> llo(n), lhi(n);
    for (std::size_t j = 0; j < n; ++j) {
        const Interval& lj = L(j + 1, bits);
        auto to128 = [](const BigInt& v) {
            const bool neg = v.sign() < 0;
            const BigInt a = neg ? BigInt(-v) : v;
            __int128 r = static_cast<__int128>(static_cast<std::uint64_t>(a >> 64)) << 64;
            r += static_cast<__int128>(static_cast<std::uint64_t>(a & BigInt(~std::uint64_t{0})));
            return neg ? -r : r;
        };
        llo[j] = to128(lj.lo().ldexp(kScale).floor());
        lhi[j] = to128(lj.hi().ldexp(kScale).ceil());
    }

    OmegaGridResult res;
    res.n = n;
    res.t = t;
    res.denominator = denominator;
    bool have = false;
    __int128 best_lo = 0, best_hi = 0;
    std::vector<std::uint64_t> m(n, 0);
    std::function<void(std::size_t, std::uint64_t, std::uint64_t, __int128, __int128)> rec =
        [&](std::size_t j, std::uint64_t left, std::uint64_t weighted, __int128 slo, __int128 shi) {
            if (j + 1 == n) {
                m[j] = left;
                ++res.points;
                const std::uint64_t w = weighted + (j + 1) * left;
                if (w < need) return;
                ++res.feasible;
                const __int128 lo = slo + static_cast<__int128>(left) * llo[j];
                const __int128 hi = shi + static_cast<__int128>(left) * lhi[j];
                if (!have || hi > best_hi) {
                    best_hi = hi;
                    res.argpoint = m;
                }
                if (!have || lo > best_lo) best_lo = lo;
                have = true;
                return;
            }
            for (std::uint64_t v = 0; v <= left; ++v) {
                m[j] = v;
                rec(j + 1, left - v, weighted + (j + 1) * v, slo + static_cast<__int128>(v) * llo[j],
                    shi + static_cast<__int128>(v) * lhi[j]);
            }
            m[j] = 0;
        };
    rec(0, total, 0, 0, 0);
    if (have) {
        auto from128 = [](__int128 v) {
            const bool neg = v < 0;
            const u128 a = neg ? static_cast<u128>(-v) : static_cast<u128>(v);
            BigInt b = detail::to_big(a);
            return neg ? BigInt(-b) : b;
        };
        const BigInt scale = pow2(kScale) * denominator;
        res.max = Interval(Rational(from128(best_lo), scale), Rational(from128(best_hi), scale));
    }
    return res;
}

/// Outcome of pushing a word over {1,2,3,4} towards {1,4}.
struct Reduction {
    CFWord input;
    CFWord result;                 ///< at most one quotient in {2,3}
    std::vector<CFWord> steps;     ///< every intermediate word, input first
    std::vector<BigInt> continuants;
    bool monotone = true;          ///< continuants never increased
    std::uint64_t sum = 0;         ///< a_1 + .. + a_t of the input
    std::uint64_t sum_class = 0;   ///< sum, sum - 2 or sum - 3
    CFWord core;                   ///< result with its single 2 or 3 removed
};

/// Repeatedly replaces a pair of quotients from {2,3} by the smaller branch of
/// replacement_floor: {2,3} ends at {1,4}, {2,2} at {1,3}, {3,3} at {2,4}.
inline Reduction reduce_2233(const CFWord& w) {
    for (Quotient a : w)
        if (a < 1 || a > 4) fail(ErrorKind::DomainError, "reduce_2233 needs quotients in 1..4");
    Reduction red;
    red.input = w;
    red.sum = w.sum();
    std::vector<Quotient> cur = w.values();
    auto record = [&] {
        red.steps.emplace_back(cur);
        BigInt k = continuant<BigInt>(std::span<const Quotient>(cur));
        if (!red.continuants.empty() && k > red.continuants.back()) red.monotone = false;
        red.continuants.push_back(std::move(k));
    };
    auto middle = [](Quotient a) { return a == 2 || a == 3; };
    record();
    for (;;) {
        std::vector<std::size_t> pos;
        for (std::size_t i = 0; i < cur.size() && pos.size() < 2; ++i)
            if (middle(cur[i])) pos.push_back(i);
        if (pos.size() < 2) break;
        const std::size_t i = pos[0], j = pos[1];
        const bool mixed = cur[i] != cur[j];
        // {2,3} may take two steps along the line a_i + a_j = 5 (concavity
        // keeps the direction); {2,2} and {3,3} take exactly one.
        for (int step = 0; step < (mixed ? 3 : 1); ++step) {
            if (cur[i] <= 1 || cur[j] <= 1) break;
            if (mixed && !(middle(cur[i]) && middle(cur[j]))) break;
            const ReplacementFloor f = replacement_floor(CFWord(cur), i, j);
            if (f.lower_first) {
                --cur[i];
                ++cur[j];
            } else {
                ++cur[i];
                --cur[j];
            }
            record();
        }
    }
    red.result = CFWord(cur);
    std::vector<Quotient> core;
    red.sum_class = red.sum;
    for (Quotient a : cur) {
        if (middle(a))
            red.sum_class = red.sum - a;
        else
            core.push_back(a);
    }
    red.core = CFWord(std::move(core));
    return red;
}

struct MapleResult {
    unsigned t = 0;
    std::uint64_t count_checked = 0;
    std::vector<CFWord> violations;  ///< words over {1,4}^t with k_t^2 < 2^(a_1+..+a_t), lexicographic
};

inline constexpr unsigned kMaxMapleLength = 40;

namespace detail {

/// k^2 < 2^s with escalation to arbitrary precision when k^2 may not fit.
inline bool square_below_power(u128 k, std::uint64_t s) {
    if (k >> 64 == 0) {
        const u128 sq = k * k;
        if (s >= 128) return true;
        return sq < (static_cast<u128>(1) << s);
    }
    const BigInt kb = to_big(k);
    return kb * kb < pow2(s);
}

struct MapleTask {
    unsigned t = 0;
    unsigned prefix_bits = 0;
    std::uint64_t prefix = 0;
    std::vector<std::uint64_t> hits;  ///< full masks, bit (t-1-i) set <=> a_{i+1} = 4

    void run() {
        u128 prev = 0, cur = 1;
        std::uint64_t sum = 0;
        for (unsigned i = 0; i < prefix_bits; ++i) {
            const Quotient a = ((prefix >> (prefix_bits - 1 - i)) & 1U) ? 4 : 1;
            const u128 next = a * cur + prev;
            prev = cur;
            cur = next;
            sum += a;
        }
        descend(prefix_bits, prefix, prev, cur, sum);
    }

    void descend(unsigned depth, std::uint64_t mask, u128 prev, u128 cur, std::uint64_t sum) {
        if (depth == t) {
            if (square_below_power(cur, sum)) hits.push_back(mask);
            return;
        }
        descend(depth + 1, mask << 1, cur, cur + prev, sum + 1);
        descend(depth + 1, (mask << 1) | 1U, cur, 4 * cur + prev, sum + 4);
    }
};

inline CFWord mask_word(std::uint64_t mask, unsigned t) {
    std::vector<Quotient> v(t);
    for (unsigned i = 0; i < t; ++i) v[i] = ((mask >> (t - 1 - i)) & 1U) ? 4 : 1;
    return CFWord(std::move(v));
}

}  // namespace detail

/// Every word over {1,4}^t with k_t^2 < 2^(a_1+..+a_t). The 2^t space is cut
/// into fixed 8-bit prefixes processed by `threads` workers; results are
/// merged in prefix order, so the output does not depend on `threads`.
inline MapleResult verify_maple(unsigned t, unsigned threads = 0) {
    if (t < 1 || t > kMaxMapleLength) fail(ErrorKind::SizeError, "verify_maple supports 1 <= t <= 40");
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    const unsigned prefix_bits = std::min(8U, t);
    const std::size_t ntasks = std::size_t{1} << prefix_bits;
    std::vector<detail::MapleTask> tasks(ntasks);
    for (std::size_t i = 0; i < ntasks; ++i) tasks[i] = {t, prefix_bits, i, {}};

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < ntasks; i = next++) tasks[i].run();
    };
    const unsigned nthreads = static_cast<unsigned>(std::min<std::size_t>(threads, ntasks));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    MapleResult res;
    res.t = t;
    res.count_checked = std::uint64_t{1} << t;
    for (const auto& task : tasks)
        for (std::uint64_t mask : task.hits) res.violations.push_back(detail::mask_word(mask, t));
    return res;
}

struct SqrtResult {
    unsigned n = 0;
    BigInt min_k;
    CFWord argmin;                 ///< lexicographically first minimiser
    std::uint64_t compositions = 0;
    bool holds = false;            ///< min_k^2 >= 2^n
};

inline constexpr unsigned kMaxSqrtN = 40;

/// Minimum of k_t over all words with quotients in {1,4} summing to n.
inline SqrtResult verify_sqrt(unsigned n) {
    if (n < 1 || n > kMaxSqrtN) fail(ErrorKind::SizeError, "verify_sqrt supports 1 <= n <= 40");
    SqrtResult res;
    res.n = n;
    u128 best = 0;
    bool have = false;
    std::vector<Quotient> word;
    std::function<void(unsigned, u128, u128)> rec = [&](unsigned left, u128 prev, u128 cur) {
        if (left == 0) {
            ++res.compositions;
            if (!have || cur < best) {
                best = cur;
                res.argmin = CFWord(word);
                have = true;
            }
            return;
        }
        for (Quotient a : {Quotient{1}, Quotient{4}}) {
            if (a > left) continue;
            word.push_back(a);
            rec(left - static_cast<unsigned>(a), cur, a * cur + prev);
            word.pop_back();
        }
    };
    rec(n, 0, 1);
    res.min_k = detail::to_big(best);
    res.holds = res.min_k * res.min_k >= pow2(n);
    return res;
}

/// t = 23 x + 24 y with x maximal.
inline std::pair<std::uint64_t, std::uint64_t> sylvester_decompose(std::uint64_t t) {
    for (std::uint64_t x = t / 23 + 1; x-- > 0;) {
        const std::uint64_t rest = t - 23 * x;
        if (rest % 24 == 0) return {x, rest / 24};
    }
    fail(ErrorKind::NoDecomposition, std::to_string(t) + " is not a nonnegative combination of 23 and 24");
}

}  // namespace qmark
