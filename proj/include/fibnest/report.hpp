#pragma once

#include <string>

#include <json.hpp>

#include "fibnest/map.hpp"
#include "fibnest/real.hpp"

// JSON building blocks for machine-readable output. Every real number is
// emitted as an exact hexadecimal float annotated with the precision it was
// computed at, so reports are byte-deterministic and lossless.

namespace fibnest {

using json = nlohmann::ordered_json;

inline json real_json(const Real& x) {
    return json{{"hex", x.to_hex()}, {"precision", static_cast<long>(x.precision())}};
}

inline json map_json(const MapSpec& m) {
    return json{{"a", real_json(m.a)},
                {"ell", real_json(m.ell)},
                {"precision", static_cast<long>(m.prec)}};
}

// Exact power of two used as a tolerance or margin.
inline json pow2_json(long exponent) {
    return json{{"hex", Real::pow2(exponent, 64).to_hex()}, {"log2", exponent}};
}

inline std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

} // namespace fibnest
