#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fibnest/errors.hpp"
#include "fibnest/real.hpp"

// The symmetric unimodal family f(x) = a * (1 - |2x - 1|^ell) on [0,1],
// critical point c = 1/2, critical value f(c) = a.

namespace fibnest {

struct MapSpec {
    Real a;            // height, 1/2 < a <= 1
    Real ell;          // critical order, >= 1
    mpfr_prec_t prec;  // working precision in bits

    static MapSpec make(const Real& a, const Real& ell, mpfr_prec_t prec) {
        if (!(a > Real::half(64) && (a < Real::one(64) || a == Real::one(64))))
            throw domain_error("map height must satisfy 1/2 < a <= 1");
        if (ell < Real::one(64)) throw domain_error("critical order must be >= 1");
        return MapSpec{a.with_precision(prec), ell.with_precision(prec), prec};
    }

    static MapSpec quadratic(const Real& a, mpfr_prec_t prec) {
        return make(a, Real::of_ui(2, prec), prec);
    }

    Real critical_point() const { return Real::half(prec); }

    // Same parameter value, evaluated at a different working precision.
    MapSpec at_precision(mpfr_prec_t p) const {
        return MapSpec{a.with_precision(p), ell.with_precision(p), p};
    }

    bool quadratic_order() const { return ell == Real::of_ui(2, 64); }
};

namespace detail {
inline void check_unit_interval(const Real& x) {
    if (x.sign() < 0 || x > Real::one(64)) throw domain_error("point outside [0,1]");
}
} // namespace detail

// One application of f, rounded to the working precision.
inline Real eval(const MapSpec& m, const Real& x) {
    detail::check_unit_interval(x);
    Real t = x.with_precision(m.prec).ldexp(1) - Real::one(m.prec); // 2x - 1, in [-1,1]
    Real p(m.prec);
    if (m.quadratic_order()) {
        p = t.sqr();
    } else {
        p = t.abs().pow(m.ell);
    }
    return m.a * (Real::one(m.prec) - p);
}

// f^n(x); n = 0 is the identity.
inline Real eval_n(const MapSpec& m, const Real& x, long n) {
    if (n < 0) throw domain_error("negative iterate");
    Real y = x.with_precision(m.prec);
    for (long i = 0; i < n; ++i) y = eval(m, y);
    return y;
}

// The exact reflection through the critical point: x and its mirror have the
// same image under f.
inline Real symmetric_point(const Real& x) {
    detail::check_unit_interval(x);
    return one_minus(x);
}

// The two preimages of y under f, in closed form:
//   x = (1 -+ r) / 2 with r = (1 - y/a)^(1/ell).
// Returns nothing for y > a; for y = a both entries equal the critical point.
inline std::pair<Real, Real> preimage_pair(const MapSpec& m, const Real& y) {
    detail::check_unit_interval(y);
    if (y > m.a) throw domain_error("no preimage above the critical value");
    Real q = Real::one(m.prec) - y.with_precision(m.prec) / m.a;
    Real r(m.prec);
    if (m.quadratic_order()) {
        r = q.sqrt();
    } else {
        r = q.pow(Real::one(m.prec) / m.ell);
    }
    Real lo = (Real::one(m.prec) - r).ldexp(-1);
    Real hi = (Real::one(m.prec) + r).ldexp(-1);
    return {lo, hi};
}

// Critical orbit c_1..c_n (c_0 = c is not stored).
struct Orbit {
    MapSpec map;
    std::vector<Real> values; // values[i] = c_{i+1}

    const Real& at(long i) const { // 1-based dynamical index
        if (i < 1 || i > static_cast<long>(values.size()))
            throw domain_error("orbit index out of range");
        return values[static_cast<std::size_t>(i - 1)];
    }
    long length() const { return static_cast<long>(values.size()); }
};

namespace detail {
// Plain orbit iteration without validation.
inline std::vector<Real> orbit_values(const MapSpec& m, long n) {
    std::vector<Real> v;
    v.reserve(static_cast<std::size_t>(n));
    Real x = m.critical_point();
    for (long i = 0; i < n; ++i) {
        x = eval(m, x);
        v.push_back(x);
    }
    return v;
}
} // namespace detail

// Critical orbit with a precision-doubling check: every value recomputed at
// twice the working precision must agree to at least prec/2 bits, otherwise
// the orbit is declared precision-exhausted at that index.
inline Orbit critical_orbit(const MapSpec& m, long n) {
    if (n < 1) throw domain_error("orbit length must be >= 1");
    std::vector<Real> lo = detail::orbit_values(m, n);
    std::vector<Real> hi = detail::orbit_values(m.at_precision(2 * m.prec), n);
    Real tol = Real::pow2(-static_cast<long>(m.prec / 2), 64);
    for (long i = 0; i < n; ++i) {
        if ((lo[static_cast<std::size_t>(i)] - hi[static_cast<std::size_t>(i)]).abs() > tol)
            throw precision_error("critical orbit loses half the working bits at index " +
                                      std::to_string(i + 1),
                                  i + 1);
    }
    return Orbit{m, std::move(lo)};
}

// Longest validated prefix of the critical orbit, for surveys over maps
// where exhaustion is expected rather than exceptional.
inline Orbit critical_orbit_prefix(const MapSpec& m, long n) {
    if (n < 1) throw domain_error("orbit length must be >= 1");
    std::vector<Real> lo = detail::orbit_values(m, n);
    std::vector<Real> hi = detail::orbit_values(m.at_precision(2 * m.prec), n);
    Real tol = Real::pow2(-static_cast<long>(m.prec / 2), 64);
    long good = n;
    for (long i = 0; i < n; ++i) {
        if ((lo[static_cast<std::size_t>(i)] - hi[static_cast<std::size_t>(i)]).abs() > tol) {
            good = i;
            break;
        }
    }
    lo.resize(static_cast<std::size_t>(good));
    return Orbit{m, std::move(lo)};
}

// Orientation-reversing fixed point q in (c, 1]: f(q) = q with f' < 0 there.
// Found by bisection on f(x) - x, which is positive at c and negative at 1.
inline Real reversing_fixed_point(const MapSpec& m) {
    Real lo = m.critical_point();
    Real hi = Real::one(m.prec);
    if (!(eval(m, lo) - lo).sign()) throw degeneracy_error("critical point is fixed");
    for (long it = 0; it < static_cast<long>(m.prec) + 16; ++it) {
        Real mid = (lo + hi).ldexp(-1);
        if (mid == lo || mid == hi) break;
        if ((eval(m, mid) - mid).sign() > 0)
            lo = mid;
        else
            hi = mid;
    }
    Real q = (lo + hi).ldexp(-1);
    if ((eval(m, q) - q).abs() > Real::pow2(3 - static_cast<long>(m.prec), 64))
        throw precision_error("fixed point residual too large");
    return q;
}

} // namespace fibnest
