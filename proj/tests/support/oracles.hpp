#pragma once

// Independent reference implementations used only by the tests.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

/// Euclid on machine integers: p/q in (0,1) -> (a_1, ..., a_t).
inline std::vector<std::uint64_t> euclid_cf(std::uint64_t p, std::uint64_t q) {
    std::vector<std::uint64_t> out;
    std::uint64_t num = q, den = p;
    while (den != 0) {
        out.push_back(num / den);
        const std::uint64_t r = num % den;
        num = den;
        den = r;
    }
    return out;
}

/// Continuant by the Euler "drop adjacent pairs" rule, memo-free recursion
/// on the first quotient: K(a_1..a_t) = a_1 K(a_2..a_t) + K(a_3..a_t).
inline unsigned long long euler_continuant(const std::vector<std::uint64_t>& w, std::size_t from = 0) {
    if (from >= w.size()) return 1;
    if (from + 1 == w.size()) return w[from];
    return w[from] * euler_continuant(w, from + 1) + euler_continuant(w, from + 2);
}

inline std::vector<unsigned long long> fibonacci(std::size_t n) {
    std::vector<unsigned long long> f{1, 1};
    while (f.size() < n + 2) f.push_back(f[f.size() - 1] + f[f.size() - 2]);
    return f;
}

/// Level F_n listed as all p/q whose canonical expansion has quotient sum
/// at most n + 1, sorted by value. Pairs (p, q).
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> farey_level_by_sum(unsigned n) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pts{{0, 1}, {1, 1}};
    const auto fib = fibonacci(n + 3);
    const std::uint64_t qmax = fib[n + 1];
    for (std::uint64_t q = 2; q <= qmax; ++q) {
        for (std::uint64_t p = 1; p < q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            const auto cf = euclid_cf(p, q);
            if (std::accumulate(cf.begin(), cf.end(), std::uint64_t{0}) <= n + 1) pts.emplace_back(p, q);
        }
    }
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return static_cast<unsigned __int128>(a.first) * b.second < static_cast<unsigned __int128>(b.first) * a.second;
    });
    return pts;
}

/// Brute force over materialised levels: the largest n with no point of F_n
/// strictly inside (lo, hi), as fractions with machine integers.
inline unsigned brute_farey_n(double lo, double hi, unsigned max_level) {
    for (unsigned n = 0; n <= max_level; ++n) {
        for (const auto& [p, q] : farey_level_by_sum(n)) {
            const double v = static_cast<double>(p) / static_cast<double>(q);
            if (lo < v && v < hi) return n == 0 ? 0 : n - 1;
        }
    }
    return max_level;
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace oracle
