#pragma once

#include <mpfr.h>

#include <algorithm>
#include <compare>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>

#include "fibnest/errors.hpp"

namespace fibnest {

// Arbitrary-precision binary float. Wraps a single mpfr_t; every value
// carries its own precision in bits. All rounding is to nearest, and binary
// operations allocate their result at the larger operand precision, so a
// computation never silently narrows.
class Real {
  public:
    explicit Real(mpfr_prec_t prec = 53) { mpfr_init2(v_, prec); }

    Real(const Real& o) {
        mpfr_init2(v_, o.precision());
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, 53);
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, o.precision());
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    static Real of_ui(unsigned long n, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_ui(r.v_, n, MPFR_RNDN);
        return r;
    }
    static Real of_si(long n, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_si(r.v_, n, MPFR_RNDN);
        return r;
    }
    // Doubles are dyadic rationals, so this conversion is exact.
    static Real of_double(double d, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_d(r.v_, d, MPFR_RNDN);
        return r;
    }
    static Real zero(mpfr_prec_t prec) { return of_ui(0, prec); }
    static Real one(mpfr_prec_t prec) { return of_ui(1, prec); }
    static Real half(mpfr_prec_t prec) {
        Real r = one(prec);
        mpfr_div_2ui(r.v_, r.v_, 1, MPFR_RNDN);
        return r;
    }
    // 2^e, exact.
    static Real pow2(long e, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_ui_2exp(r.v_, 1, e, MPFR_RNDN);
        return r;
    }
    // Accepts decimal ("0.978") and hex float ("0xc.ap-4") literals.
    static Real parse(const std::string& s, mpfr_prec_t prec) {
        Real r(prec);
        char* end = nullptr;
        mpfr_strtofr(r.v_, s.c_str(), &end, 0, MPFR_RNDN);
        if (end == s.c_str() || *end != '\0')
            throw domain_error("unparseable numeric literal: " + s);
        return r;
    }

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

    // Copy rounded (or zero-padded) to a different precision.
    Real with_precision(mpfr_prec_t prec) const {
        Real r(prec);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    friend Real operator+(const Real& a, const Real& b) {
        Real r(join(a, b));
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator-(const Real& a, const Real& b) {
        Real r(join(a, b));
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator*(const Real& a, const Real& b) {
        Real r(join(a, b));
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator/(const Real& a, const Real& b) {
        Real r(join(a, b));
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    Real operator-() const {
        Real r(precision());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }

    Real abs() const {
        Real r(precision());
        mpfr_abs(r.v_, v_, MPFR_RNDN);
        return r;
    }
    Real sqr() const {
        Real r(precision());
        mpfr_sqr(r.v_, v_, MPFR_RNDN);
        return r;
    }
    Real sqrt() const {
        Real r(precision());
        mpfr_sqrt(r.v_, v_, MPFR_RNDN);
        return r;
    }
    Real pow(const Real& e) const {
        Real r(join(*this, e));
        mpfr_pow(r.v_, v_, e.v_, MPFR_RNDN);
        return r;
    }
    // x * 2^e, exact.
    Real ldexp(long e) const {
        Real r(precision());
        mpfr_mul_2si(r.v_, v_, e, MPFR_RNDN);
        return r;
    }

    friend std::strong_ordering operator<=>(const Real& a, const Real& b) {
        int c = mpfr_cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }
    friend bool operator==(const Real& a, const Real& b) {
        return mpfr_cmp(a.v_, b.v_) == 0;
    }
    friend bool operator<(const Real& a, unsigned long b) { return mpfr_cmp_ui(a.v_, b) < 0; }
    friend bool operator>(const Real& a, unsigned long b) { return mpfr_cmp_ui(a.v_, b) > 0; }

    static const Real& min(const Real& a, const Real& b) { return b < a ? b : a; }
    static const Real& max(const Real& a, const Real& b) { return a < b ? b : a; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    // Exact hexadecimal serialization ("0xc.a7b4p-4"); parse() inverts it
    // bit-for-bit whenever the reading precision is at least this one.
    std::string to_hex() const {
        char* s = nullptr;
        mpfr_asprintf(&s, "%Ra", v_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

    // Rounded decimal rendering for human-readable tables; use to_hex() when
    // the exact value matters.
    std::string to_decimal(int digits) const {
        char fmt[16];
        std::snprintf(fmt, sizeof fmt, "%%.%dRg", digits);
        char* s = nullptr;
        mpfr_asprintf(&s, fmt, v_);
        std::string out(s);
        mpfr_free_str(s);
        return out;
    }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

  private:
    static mpfr_prec_t join(const Real& a, const Real& b) {
        return std::max(a.precision(), b.precision());
    }
    mpfr_t v_;
};

inline std::ostream& operator<<(std::ostream& os, const Real& x) {
    return os << x.to_hex();
}

// 1 - x, with the result precision widened until the subtraction is exact.
inline Real one_minus(const Real& x) {
    if (x.sign() == 0) return Real::one(x.precision());
    long pad = 0;
    mpfr_exp_t e = mpfr_get_exp(x.get());
    if (e < 1) pad = 1 - static_cast<long>(e);
    Real r(x.precision() + pad + 1);
    int t = mpfr_ui_sub(r.get(), 1, x.get(), MPFR_RNDN);
    if (t != 0) throw error("inexact symmetric point");
    return r;
}

} // namespace fibnest
