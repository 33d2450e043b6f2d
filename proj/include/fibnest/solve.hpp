#pragma once

#include "fibnest/errors.hpp"
#include "fibnest/map.hpp"
#include "fibnest/real.hpp"

namespace fibnest {

// Solves f^n(x) = target for x on a bracket where f^n is monotone, by plain
// bisection at the working precision. Every midpoint evaluation is checked
// against the running value hull: a monotone branch keeps h(mid) between
// h(lo) and h(hi), so a breach is reported as a monotonicity violation
// instead of silently converging to a wrong root.
//
// The bracket endpoints are included in the initial sign check; the target
// must be strictly enclosed. n = 0 degenerates to the identity.
inline Real monotone_solve(const MapSpec& m, long n, const Real& target, const Real& bracket_lo,
                           const Real& bracket_hi) {
    if (n < 0) throw domain_error("negative iterate");
    Real lo = bracket_lo.with_precision(m.prec);
    Real hi = bracket_hi.with_precision(m.prec);
    if (!(lo < hi)) throw bracket_error("empty bracket");
    if (n == 0) {
        if (target < lo || target > hi) throw bracket_error("identity solve: target outside bracket");
        return target.with_precision(m.prec);
    }
    Real h_lo = eval_n(m, lo, n) - target;
    Real h_hi = eval_n(m, hi, n) - target;
    if (h_lo.sign() == 0) return lo;
    if (h_hi.sign() == 0) return hi;
    if (h_lo.sign() == h_hi.sign())
        throw bracket_error("bracket endpoints do not straddle the target");

    // slack for the hull check: evaluation noise of f^n grows with the
    // accumulated derivative, so leave generous absolute headroom
    Real slack = Real::pow2(128 - static_cast<long>(m.prec), 64);
    const long max_iter = static_cast<long>(m.prec) + 32;
    for (long it = 0; it < max_iter; ++it) {
        Real mid = (lo + hi).ldexp(-1);
        if (mid == lo || mid == hi) break; // bracket width underflowed
        Real h_mid = eval_n(m, mid, n) - target;
        Real bound = Real::max(h_lo.abs(), h_hi.abs()) + slack;
        if (h_mid.abs() > bound)
            throw monotonicity_error("sign pattern violation inside bisection bracket");
        if (h_mid.sign() == 0) return mid;
        if (h_mid.sign() == h_lo.sign()) {
            lo = mid;
            h_lo = h_mid;
        } else {
            hi = mid;
            h_hi = h_mid;
        }
    }
    return (lo + hi).ldexp(-1);
}

} // namespace fibnest
