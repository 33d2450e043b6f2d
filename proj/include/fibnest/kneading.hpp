#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fibnest/combinatorics.hpp"
#include "fibnest/errors.hpp"
#include "fibnest/intervals.hpp"
#include "fibnest/map.hpp"
#include "fibnest/real.hpp"

// Cutting times of the critical point, computed two independent ways:
//
//  * cutting_times walks the tower of images of the maximal one-sided
//    monotone neighbourhood of c. Writing D_n for the image of that
//    neighbourhood under f^n, n is a cutting time exactly when c lies
//    strictly inside D_n; after a cut the next level restarts from the image
//    of the piece that was cut off. Only the critical orbit and one integer
//    of combinatorial state are needed, so this scales to large horizons.
//
//  * preimage_cutting_times enumerates the full preimage sets f^{-k}(c)
//    (exponential in the depth) and reads the definition literally: a new
//    cutting time occurs when the preimage nearest to c moves strictly
//    inside the symmetric interval spanned by the previous nearest pair.
//
// Agreement of the two is a standing invariant of the test suite.

namespace fibnest {

struct CuttingSequence {
    std::vector<long> times; // ascending
    long horizon;            // decisions were made for every n <= horizon
};

inline CuttingSequence cutting_times(const MapSpec& m, long horizon) {
    if (horizon < 1) throw domain_error("horizon must be >= 1");
    Orbit orb = critical_orbit(m, horizon);
    const Real c = m.critical_point();
    const Real theta = degeneracy_threshold(m.prec);

    CuttingSequence out{{}, horizon};
    // n = 1: D_1 is the image (0, c_1) of a full one-sided branch.
    if (!locate_strict(c, Real::zero(m.prec), orb.at(1), theta))
        throw degeneracy_error("critical value does not clear the critical point");
    out.times.push_back(1);

    long beta = 1; // other endpoint of D_n is c_beta
    for (long n = 2; n <= horizon; ++n) {
        const Real& e1 = orb.at(beta);
        const Real& e2 = orb.at(n);
        bool cut = locate_strict(c, Real::min(e1, e2), Real::max(e1, e2), theta);
        if (cut) {
            out.times.push_back(n);
            beta = 1;
        } else {
            beta += 1;
        }
    }
    return out;
}

// Length of the initial segment matching 1, 2, 3, 5, 8, ...
inline long fibonacci_prefix_len(const CuttingSequence& cs) {
    std::vector<mpz_class> fib = fib_numbers(cs.times.size());
    long n = 0;
    while (n < static_cast<long>(cs.times.size()) &&
           fib[static_cast<std::size_t>(n)] == cs.times[static_cast<std::size_t>(n)])
        ++n;
    return n;
}

// Full preimage tree of the critical point, breadth first.
struct PreimageFan {
    long depth;
    std::vector<std::vector<Real>> levels; // levels[k-1] = f^{-k}(c)
};

inline constexpr long kMaxPreimageDepth = 20;

namespace detail {
inline std::vector<Real> preimage_level(const MapSpec& m, const std::vector<Real>& prev) {
    std::vector<Real> next;
    next.reserve(prev.size() * 2);
    for (const Real& y : prev) {
        if (y > m.a) continue; // no preimage
        auto [lo, hi] = preimage_pair(m, y);
        next.push_back(lo);
        if (!(lo == hi)) next.push_back(hi);
    }
    return next;
}
} // namespace detail

inline PreimageFan preimage_fan(const MapSpec& m, long depth) {
    if (depth < 1) throw domain_error("depth must be >= 1");
    if (depth > kMaxPreimageDepth)
        throw budget_error("preimage depth beyond the exponential-enumeration budget");
    PreimageFan fan{depth, {}};
    std::vector<Real> level{m.critical_point()};
    for (long k = 1; k <= depth; ++k) {
        level = detail::preimage_level(m, level);
        fan.levels.push_back(level);
    }
    return fan;
}

namespace detail {
// Distance from c of the preimage nearest to c, with a tie guard: every
// point within the threshold of the minimum must belong to one symmetric
// pair, anything else is an unresolvable tie.
inline Real nearest_distance(const std::vector<Real>& level, const Real& c, const Real& theta) {
    if (level.empty()) throw insufficient_data_error("empty preimage level");
    Real best = (level.front() - c).abs();
    for (const Real& x : level) best = Real::min(best, (x - c).abs());
    std::vector<const Real*> near;
    for (const Real& x : level)
        if ((x - c).abs() - best < theta) near.push_back(&x);
    if (near.size() > 2) throw degeneracy_error("nearest-preimage tie beyond a symmetric pair");
    if (near.size() == 2) {
        Real s = *near[0] + *near[1] - Real::one(c.precision());
        if (s.abs() > theta) throw degeneracy_error("nearest-preimage tie beyond a symmetric pair");
    }
    return best;
}
} // namespace detail

// The preimage nearest to c at one fan level, reported as the symmetric
// pair spanning the open interval used by the literal cutting-time rule.
struct NearestPreimage {
    Real distance;
    Real left, right;
};

inline NearestPreimage nearest_preimage(const MapSpec& m, const std::vector<Real>& level) {
    const Real c = m.critical_point();
    const Real theta = degeneracy_threshold(m.prec);
    Real best = detail::nearest_distance(level, c, theta);
    std::vector<Real> near;
    for (const Real& x : level)
        if ((x - c).abs() - best < theta) near.push_back(x);
    if (near.size() == 1) return {best, near.front(), near.front()};
    return {best, Real::min(near[0], near[1]), Real::max(near[0], near[1])};
}

// Literal reading of the definition, streaming the fan level by level.
inline CuttingSequence preimage_cutting_times(const MapSpec& m, long depth) {
    if (depth < 1) throw domain_error("depth must be >= 1");
    if (depth > kMaxPreimageDepth)
        throw budget_error("preimage depth beyond the exponential-enumeration budget");
    const Real c = m.critical_point();
    const Real theta = degeneracy_threshold(m.prec);

    CuttingSequence out{{}, depth};
    std::vector<Real> level{c};
    Real current(m.prec); // nearest distance at the previous cutting time
    for (long k = 1; k <= depth; ++k) {
        level = detail::preimage_level(m, level);
        if (level.empty()) break;
        Real rho = detail::nearest_distance(level, c, theta);
        if (k == 1) {
            out.times.push_back(1); // the seed of the recursion
            current = rho;
            continue;
        }
        Real gap = current - rho;
        if (gap.abs() < theta && gap.sign() != 0)
            throw degeneracy_error("nearest preimage lands on the previous nearest pair");
        if (gap.sign() > 0) { // strictly inside the previous symmetric interval
            out.times.push_back(k);
            current = rho;
        }
    }
    return out;
}

// Times n at which the orbit point c_n comes strictly closer to c than every
// earlier orbit point. An exact hit of the mirror of the standing nearest
// point counts as a return as well; any other tie is refused.
struct ClosestReturns {
    std::vector<long> times;
    std::vector<Real> distances; // |c_t - c| for each recorded time
};

inline ClosestReturns closest_returns(const MapSpec& m, long horizon) {
    if (horizon < 1) throw domain_error("horizon must be >= 1");
    Orbit orb = critical_orbit(m, horizon);
    const Real c = m.critical_point();
    const Real theta = degeneracy_threshold(m.prec);

    ClosestReturns out;
    Real best_point = orb.at(1);
    Real best = (best_point - c).abs();
    out.times.push_back(1);
    out.distances.push_back(best);
    for (long n = 2; n <= horizon; ++n) {
        const Real& x = orb.at(n);
        Real d = (x - c).abs();
        Real gap = best - d;
        if (gap.sign() > 0 && gap > theta) {
            out.times.push_back(n);
            out.distances.push_back(d);
            best_point = x;
            best = d;
        } else if (gap.abs() < theta || gap.sign() == 0) {
            if (x == best_point) continue; // same point again: no improvement
            if (gap.sign() == 0 && x == symmetric_point(best_point)) {
                out.times.push_back(n); // exact mirror hit
                out.distances.push_back(d);
                best_point = x;
                best = d;
                continue;
            }
            throw degeneracy_error("closest-return tie at index " + std::to_string(n));
        }
    }
    return out;
}

// --- Fibonacci parameter search -----------------------------------------

// Raw tower scan used only to steer the parameter bisection: no degeneracy
// guard, no orbit validation, stops at the first index whose cut status
// differs from the Fibonacci target.
struct TowerDeviation {
    long index;
    bool should_cut; // what the Fibonacci sequence demanded at `index`
    int direction;   // +1: raise a, -1: lower a, to move towards the target
};

namespace detail {
inline std::optional<TowerDeviation> first_fibonacci_deviation(const MapSpec& m, long horizon) {
    std::vector<char> fib_mask(static_cast<std::size_t>(horizon) + 1, 0);
    for (const mpz_class& s : fib_upto(horizon)) fib_mask[s.get_ui()] = 1;

    const Real c = m.critical_point();
    std::vector<Real> orb;
    orb.reserve(static_cast<std::size_t>(horizon));
    Real x = c;
    long beta = 1;
    int parity = +1; // sign of prod f'(c_i), i.e. (-1)^(#right visits)
    for (long n = 1; n <= horizon; ++n) {
        x = eval(m, x);
        orb.push_back(x);
        bool cut;
        if (n == 1) {
            cut = x > c; // D_1 = (0, c_1)
        } else {
            const Real& e1 = orb[static_cast<std::size_t>(beta - 1)];
            const Real& e2 = orb[static_cast<std::size_t>(n - 1)];
            cut = Real::min(e1, e2) < c && c < Real::max(e1, e2);
        }
        bool should = fib_mask[static_cast<std::size_t>(n)] != 0;
        if (cut != should) {
            // The cut decision flips when c_n crosses c; asymptotically
            // d(c_n)/da carries the sign of prod_{i<n} f'(c_i).
            int anchor = (orb[static_cast<std::size_t>(beta - 1)] > c) ? +1 : -1;
            int target_sign = should ? -anchor : anchor;
            return TowerDeviation{n, should, parity * target_sign};
        }
        if (cut)
            beta = 1;
        else
            beta += 1;
        if (x > c) parity = -parity;
    }
    return std::nullopt;
}
} // namespace detail

struct ParamSearchResult {
    MapSpec map;
    long verified_prefix;
    Real bracket_width;
    long steps;
};

inline constexpr long kMaxSearchDepth = 13;

// Bisection for a parameter whose cutting times are Fibonacci through the
// requested depth. While midpoints deviate from the Fibonacci sequence
// within the scan horizon, the deviation steers the bracket; the first
// midpoint with no visible deviation is locked (its combinatorics already
// exceed any depth within budget) and the bracket is centred on it until the
// width contract is met. All decisions are discrete, so reruns at different
// precisions return bit-identical parameters.
inline ParamSearchResult find_fibonacci_parameter(
    const Real& ell, long target_depth, mpfr_prec_t prec,
    std::optional<std::pair<Real, Real>> bracket = std::nullopt) {
    if (target_depth < 1) throw domain_error("target depth must be >= 1");
    if (target_depth > kMaxSearchDepth)
        throw budget_error("target depth beyond the search budget");

    std::vector<mpz_class> fib = fib_numbers(static_cast<std::size_t>(target_depth));
    const long contract_horizon = fib.back().get_si();
    // Scanning well past the contract horizon makes the accepted midpoint's
    // combinatorics overdetermined, so reruns at higher precision take the
    // same branch at every bisection step. The 32x margin also keeps the
    // accepted parameter combinatorially faithful across the orbit windows
    // (~10^4 points) that the return-structure verifiers examine.
    const long scan_horizon = std::max<long>(64, 32 * contract_horizon);

    // The default endpoint is parsed at a fixed small precision so that the
    // bisection midpoints are the same dyadic rationals at every working
    // precision; they stay exactly representable, so reruns at a higher
    // precision reproduce the accepted parameter bit for bit.
    Real lo = bracket ? bracket->first.with_precision(prec)
                      : Real::parse("0.52", 64).with_precision(prec);
    Real hi = bracket ? bracket->second.with_precision(prec) : Real::one(prec);
    if (!(lo < hi) || !(lo > Real::half(64)) || hi > Real::one(64))
        throw domain_error("search bracket must satisfy 1/2 < lo < hi <= 1");

    const Real width_goal = Real::pow2(8 - static_cast<long>(prec), prec);
    Real a_star(prec);
    bool locked = false;
    long steps = 0;
    while (!(hi - lo < width_goal)) {
        Real mid = (lo + hi).ldexp(-1);
        ++steps;
        if (steps > static_cast<long>(prec) + 64)
            throw search_error("parameter bisection failed to converge");
        auto dev = detail::first_fibonacci_deviation(MapSpec::make(mid, ell, prec), scan_horizon);
        if (!dev) {
            a_star = mid;
            locked = true;
            Real w = width_goal.ldexp(-2);
            lo = mid - w;
            hi = mid + w;
            break;
        }
        if (dev->direction > 0)
            lo = mid;
        else
            hi = mid;
    }
    if (!locked) a_star = (lo + hi).ldexp(-1);

    MapSpec found = MapSpec::make(a_star, ell, prec);
    CuttingSequence cs = cutting_times(found, contract_horizon);
    long prefix = fibonacci_prefix_len(cs);
    if (prefix < target_depth)
        throw search_error("bracket does not straddle the target combinatorics (prefix " +
                           std::to_string(prefix) + ")");
    return ParamSearchResult{found, prefix, hi - lo, steps};
}

// Fibonacci to the given depth, including the closest-return side condition
// |c_1 - c| > |c_2 - c|.
inline bool is_fibonacci(const MapSpec& m, long depth) {
    if (depth < 1) throw domain_error("depth must be >= 1");
    std::vector<mpz_class> fib = fib_numbers(static_cast<std::size_t>(depth));
    long horizon = fib.back().get_si();
    CuttingSequence cs;
    try {
        cs = cutting_times(m, horizon);
    } catch (const degeneracy_error&) {
        return false;
    } catch (const precision_error&) {
        return false;
    }
    if (fibonacci_prefix_len(cs) < depth) return false;
    Orbit orb = critical_orbit(m, 2);
    const Real c = m.critical_point();
    Real d1 = (orb.at(1) - c).abs();
    Real d2 = (orb.at(2) - c).abs();
    Real theta = degeneracy_threshold(m.prec);
    if ((d1 - d2).abs() < theta) throw degeneracy_error("side condition unresolvable");
    return d1 > d2;
}

} // namespace fibnest
