#pragma once

#include "fibnest/map.hpp"
#include "fibnest/real.hpp"

// Frozen regression constants. The parameter below was produced by
// find_fibonacci_parameter(ell = 2, depth 13, 512 bits) and is pinned
// bit-for-bit: the search is deterministic and must keep reproducing it.

namespace fibnest::constants {

inline constexpr const char* kQuadraticFibonacciParameterHex =
    "0xf.a64e0537d8d5279e0ac971da37128624c6f2fb1364c581d9p-4";

inline Real quadratic_fibonacci_parameter(mpfr_prec_t prec) {
    return Real::parse(kQuadraticFibonacciParameterHex, prec);
}

inline MapSpec quadratic_fibonacci_map(mpfr_prec_t prec) {
    return MapSpec::quadratic(quadratic_fibonacci_parameter(prec), prec);
}

} // namespace fibnest::constants
