#pragma once

#include <stdexcept>
#include <string>

namespace fibnest {

// Failure taxonomy. Verification outcomes (pass/fail) travel through result
// structs; exceptions are reserved for computational failures, i.e. the
// computation could not produce a trustworthy answer at all.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the documented domain of an operation.
struct domain_error : error {
    using error::error;
};

// Working precision exhausted; `index` is the first orbit index whose value
// could no longer be validated.
struct precision_error : error {
    long index;
    explicit precision_error(const std::string& what, long idx = -1)
        : error(what), index(idx) {}
};

// A decision quantity fell inside the degeneracy threshold, so the discrete
// outcome (inside/outside, tie-breaks) is not defensible.
struct degeneracy_error : error {
    using error::error;
};

// A bisection bracket does not enclose its target.
struct bracket_error : error {
    using error::error;
};

// Evaluations inside a bisection contradicted monotonicity of the branch.
struct monotonicity_error : error {
    using error::error;
};

// Requested depth/level/horizon exceeds the configured budget.
struct budget_error : error {
    using error::error;
};

// A parameter search could not lock onto the target combinatorics.
struct search_error : error {
    using error::error;
};

// Too few orbit witnesses to carry out a decomposition.
struct insufficient_data_error : error {
    using error::error;
};

} // namespace fibnest
