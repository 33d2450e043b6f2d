#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "fibnest/errors.hpp"

// Integer combinatorics of the cutting-time sequence 1, 2, 3, 5, 8, ...
// (Fibonacci numbers under the recursion S_{k+1} = S_k + S_{k-1}) and of the
// induced ordering of the critical orbit. Everything here is exact integer
// arithmetic; the numeric layer supplies the matching oracle tests.

namespace fibnest {

// S_0..S_{count-1}. Values are arbitrary-width integers.
inline std::vector<mpz_class> fib_numbers(std::size_t count) {
    std::vector<mpz_class> s;
    s.reserve(count);
    if (count >= 1) s.emplace_back(1);
    if (count >= 2) s.emplace_back(2);
    while (s.size() < count) s.push_back(s[s.size() - 1] + s[s.size() - 2]);
    return s;
}

// All S_k <= m, for m >= 1.
inline std::vector<mpz_class> fib_upto(const mpz_class& m) {
    std::vector<mpz_class> s;
    if (m < 1) return s;
    s.emplace_back(1);
    if (m >= 2) s.emplace_back(2);
    while (true) {
        mpz_class next = s[s.size() - 1] + (s.size() >= 2 ? s[s.size() - 2] : mpz_class(1));
        if (next > m) break;
        s.push_back(next);
    }
    return s;
}

// A sum of Fibonacci numbers S_{k_1} + S_{k_2} + ... with k_{i+1} >= k_i + 2.
// Under that gap condition the representation of a positive integer is
// unique (Zeckendorf), so the index list doubles as a name for the integer.
struct FibSum {
    std::vector<int> indices; // strictly increasing, gaps >= 2

    bool valid() const {
        if (indices.empty()) return false;
        for (std::size_t i = 0; i < indices.size(); ++i) {
            if (indices[i] < 0) return false;
            if (i > 0 && indices[i] < indices[i - 1] + 2) return false;
        }
        return true;
    }

    mpz_class value() const {
        if (indices.empty()) return 0;
        std::vector<mpz_class> s = fib_numbers(static_cast<std::size_t>(indices.back()) + 1);
        mpz_class m = 0;
        for (int k : indices) m += s[static_cast<std::size_t>(k)];
        return m;
    }

    int leading() const { return indices.front(); }

    std::string str() const {
        std::string out = "{";
        for (std::size_t i = 0; i < indices.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(indices[i]);
        }
        return out + "}";
    }

    friend bool operator==(const FibSum& a, const FibSum& b) {
        return a.indices == b.indices;
    }
};

// Greedy decomposition; the greedy choice is what forces gaps >= 2.
inline FibSum zeckendorf(const mpz_class& m) {
    if (m <= 0) throw domain_error("zeckendorf: argument must be positive");
    std::vector<mpz_class> s = fib_upto(m);
    FibSum out;
    mpz_class rest = m;
    for (auto k = static_cast<long>(s.size()) - 1; k >= 0 && rest > 0; --k) {
        if (s[static_cast<std::size_t>(k)] <= rest) {
            out.indices.push_back(static_cast<int>(k));
            rest -= s[static_cast<std::size_t>(k)];
        }
    }
    std::reverse(out.indices.begin(), out.indices.end());
    return out;
}

inline FibSum zeckendorf(long m) { return zeckendorf(mpz_class(m)); }

enum class Side { left, right };

inline const char* to_string(Side s) { return s == Side::left ? "left" : "right"; }

// Which side of the critical point c the orbit point c_m falls on is decided
// by the leading index of the expansion alone: k_1 mod 4 in {1,2} lands left
// of c, k_1 mod 4 in {0,3} lands right.
inline Side side_of(int leading_index) {
    int r = leading_index % 4;
    return (r == 1 || r == 2) ? Side::left : Side::right;
}

inline Side side_of(const FibSum& f) { return side_of(f.leading()); }

namespace detail {
// Distance order of two points on the SAME side of c, from the expansions
// alone. Blocks of expansions sharing a prefix P + next index t are ordered
// by t: with |P| odd the distance grows with t, with |P| even it shrinks; a
// bare prefix sits above all its continuations when |P| is odd and below
// them when |P| is even. On one side the blocks of different leading index
// never interleave, so this settles every same-side pair; across sides they
// do interleave and compare_abs below takes a different route.
inline std::strong_ordering prefix_parity_order(const FibSum& a, const FibSum& b) {
    if (a.indices == b.indices) return std::strong_ordering::equal;
    std::size_t i = 0;
    while (i < a.indices.size() && i < b.indices.size() && a.indices[i] == b.indices[i]) ++i;
    const bool prefix_odd = (i % 2 == 1);
    if (i == a.indices.size())
        return prefix_odd ? std::strong_ordering::greater : std::strong_ordering::less;
    if (i == b.indices.size())
        return prefix_odd ? std::strong_ordering::less : std::strong_ordering::greater;
    const bool a_next_larger = a.indices[i] > b.indices[i];
    if (prefix_odd)
        return a_next_larger ? std::strong_ordering::greater : std::strong_ordering::less;
    return a_next_larger ? std::strong_ordering::less : std::strong_ordering::greater;
}
} // namespace detail

// Orders the positions of c_m and c_n on the interval: left side precedes
// right side; within the left side larger distance from c means further
// left, within the right side larger distance means further right.
inline std::strong_ordering spatial_compare(const FibSum& a, const FibSum& b) {
    Side sa = side_of(a), sb = side_of(b);
    if (sa != sb)
        return sa == Side::left ? std::strong_ordering::less : std::strong_ordering::greater;
    std::strong_ordering d = detail::prefix_parity_order(a, b);
    if (d == std::strong_ordering::equal) return std::strong_ordering::equal;
    if (sa == Side::left)
        return d == std::strong_ordering::greater ? std::strong_ordering::less
                                                  : std::strong_ordering::greater;
    return d;
}

// Orders |c_m - c| against |c_n - c| from the expansions alone. On the same
// side of c this is the prefix-parity order. Across sides the map's symmetry
// decides it: f is strictly decreasing in the distance from c, so
// |c_m| < |c_n| exactly when c_{m+1} lies above c_{n+1}, and the shifted
// pair is a position comparison (trivial when the images straddle c, and a
// settled same-side question otherwise). The numeric layer re-derives this
// order from the actual orbit as an oracle.
inline std::strong_ordering compare_abs(const FibSum& a, const FibSum& b) {
    if (a.indices == b.indices) return std::strong_ordering::equal;
    if (side_of(a) == side_of(b)) return detail::prefix_parity_order(a, b);
    FibSum a1 = zeckendorf(a.value() + 1);
    FibSum b1 = zeckendorf(b.value() + 1);
    std::strong_ordering img = spatial_compare(a1, b1);
    return img == std::strong_ordering::greater ? std::strong_ordering::less
         : img == std::strong_ordering::less    ? std::strong_ordering::greater
                                                : std::strong_ordering::equal;
}

// Combined decision for a pair of orbit indices.
struct OrbitOrder {
    std::strong_ordering distance; // |c_m - c|  vs |c_n - c|
    std::strong_ordering position; // c_m vs c_n on the interval
};

inline OrbitOrder compare_orbit_points(long m, long n) {
    FibSum a = zeckendorf(m), b = zeckendorf(n);
    return OrbitOrder{compare_abs(a, b), spatial_compare(a, b)};
}

} // namespace fibnest
