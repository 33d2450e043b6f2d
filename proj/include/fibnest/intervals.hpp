#pragma once

#include "fibnest/errors.hpp"
#include "fibnest/real.hpp"

namespace fibnest {

// Degeneracy threshold tied to the working precision: decisions are only
// accepted when the deciding quantity clears the threshold 2^(-prec/2).
inline Real degeneracy_threshold(mpfr_prec_t prec) {
    return Real::pow2(-static_cast<long>(prec / 2), 64);
}

// Strict membership of x in the open interval (lo, hi): inside or outside
// only when x clears both endpoints by more than theta, otherwise the
// decision is refused.
inline bool locate_strict(const Real& x, const Real& lo, const Real& hi, const Real& theta) {
    if (x - lo > theta && hi - x > theta) return true;
    if (lo - x > theta || x - hi > theta) return false;
    throw degeneracy_error("point within the degeneracy threshold of an interval endpoint");
}

// Lenient membership for boundary-orbit tests: a point within theta of an
// endpoint counts as sitting on the boundary, i.e. not inside.
inline bool inside_with_margin(const Real& x, const Real& lo, const Real& hi, const Real& theta) {
    return x - lo > theta && hi - x > theta;
}

} // namespace fibnest
