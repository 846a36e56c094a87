#ifndef IMSPELAB_BIGREAL_HPP
#define IMSPELAB_BIGREAL_HPP

#include <mpfr.h>

#include <string>
#include <utility>

#include "imspelab/errors.hpp"

namespace imspelab {

// Working-precision policy for all extended-precision arithmetic.
// `digits` is the number of correct decimal digits every operation must
// deliver; escalation multiplies digits by `escalation_factor` up to
// `max_digits` when an evaluation cannot be certified.
class PrecisionContext {
public:
    explicit PrecisionContext(int digits = 60, int max_digits = 960,
                              int escalation_factor = 2)
        : digits_(digits), max_digits_(max_digits), factor_(escalation_factor) {
        if (digits < 16)
            throw DomainError("PrecisionContext: digits must be >= 16");
        if (max_digits < digits)
            throw DomainError("PrecisionContext: max_digits must be >= digits");
        if (escalation_factor < 2)
            throw DomainError("PrecisionContext: escalation_factor must be >= 2");
    }

    int digits() const { return digits_; }
    int max_digits() const { return max_digits_; }
    int escalation_factor() const { return factor_; }
    bool at_ceiling() const { return digits_ >= max_digits_; }

    // Next context in the escalation ladder (same ceiling, same factor).
    PrecisionContext escalated() const {
        int d = digits_ * factor_;
        if (d > max_digits_) d = max_digits_;
        return PrecisionContext(d, max_digits_, factor_);
    }

    // Binary working precision: ceil(digits * log2(10)) plus guard bits, so
    // results are correctly rounded to at least `digits` decimal digits.
    mpfr_prec_t prec_bits() const {
        return static_cast<mpfr_prec_t>((digits_ * 3322 + 999) / 1000) + 16;
    }

private:
    int digits_;
    int max_digits_;
    int factor_;
};

// Immutable extended-precision real. Precision is a property of the value's
// originating context; binary operations round correctly at the wider of the
// two operand precisions.
class BigReal {
public:
    BigReal() { mpfr_init2(v_, 64); mpfr_set_nan(v_); }

    explicit BigReal(const PrecisionContext& ctx) {
        mpfr_init2(v_, ctx.prec_bits());
        mpfr_set_zero(v_, 1);
    }
    BigReal(double x, const PrecisionContext& ctx) {
        mpfr_init2(v_, ctx.prec_bits());
        mpfr_set_d(v_, x, MPFR_RNDN);
    }
    BigReal(long x, const PrecisionContext& ctx) {
        mpfr_init2(v_, ctx.prec_bits());
        mpfr_set_si(v_, x, MPFR_RNDN);
    }
    BigReal(int x, const PrecisionContext& ctx) : BigReal(static_cast<long>(x), ctx) {}

    BigReal(const BigReal& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigReal(BigReal&& o) noexcept {
        mpfr_init2(v_, 64);
        mpfr_swap(v_, o.v_);
    }
    BigReal& operator=(const BigReal& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigReal& operator=(BigReal&& o) noexcept {
        if (this != &o) mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigReal() { mpfr_clear(v_); }

    mpfr_prec_t prec_bits() const { return mpfr_get_prec(v_); }

    // Same value re-represented at ctx precision (lossless when extending).
    BigReal at(const PrecisionContext& ctx) const {
        BigReal r(ctx);
        mpfr_set(r.v_, v_, MPFR_RNDN);
        return r;
    }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    // mpfr access for the few routines that need it (formatting, special
    // functions). Treat as read-only unless you own the value.
    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    friend BigReal operator+(const BigReal& a, const BigReal& b) {
        BigReal r(wider(a, b));
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator-(const BigReal& a, const BigReal& b) {
        BigReal r(wider(a, b));
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator*(const BigReal& a, const BigReal& b) {
        BigReal r(wider(a, b));
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator/(const BigReal& a, const BigReal& b) {
        BigReal r(wider(a, b));
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend BigReal operator-(const BigReal& a) {
        BigReal r = a;
        mpfr_neg(r.v_, r.v_, MPFR_RNDN);
        return r;
    }
    BigReal& operator+=(const BigReal& b) {
        widen_to(b);
        mpfr_add(v_, v_, b.v_, MPFR_RNDN);
        return *this;
    }
    BigReal& operator-=(const BigReal& b) {
        widen_to(b);
        mpfr_sub(v_, v_, b.v_, MPFR_RNDN);
        return *this;
    }
    BigReal& operator*=(const BigReal& b) {
        widen_to(b);
        mpfr_mul(v_, v_, b.v_, MPFR_RNDN);
        return *this;
    }

    friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const BigReal& a, const BigReal& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const BigReal& a, const BigReal& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
    friend bool operator==(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator!=(const BigReal& a, const BigReal& b) { return mpfr_equal_p(a.v_, b.v_) == 0; }

private:
    struct prec_tag { mpfr_prec_t p; };
    explicit BigReal(prec_tag t) { mpfr_init2(v_, t.p); mpfr_set_zero(v_, 1); }
    static prec_tag wider(const BigReal& a, const BigReal& b) {
        mpfr_prec_t pa = mpfr_get_prec(a.v_), pb = mpfr_get_prec(b.v_);
        return prec_tag{pa > pb ? pa : pb};
    }
    void widen_to(const BigReal& b) {
        if (mpfr_get_prec(b.v_) > mpfr_get_prec(v_)) {
            BigReal tmp(prec_tag{mpfr_get_prec(b.v_)});
            mpfr_set(tmp.v_, v_, MPFR_RNDN);
            mpfr_swap(v_, tmp.v_);
        }
    }

    mpfr_t v_;
};

BigReal abs(const BigReal& x);

// Special functions. All correctly rounded at ctx precision.
BigReal erf(const BigReal& x, const PrecisionContext& ctx);
BigReal exp_hp(const BigReal& x, const PrecisionContext& ctx);
BigReal sqrt_hp(const BigReal& x, const PrecisionContext& ctx);
BigReal log10_hp(const BigReal& x, const PrecisionContext& ctx);
BigReal pi_hp(const PrecisionContext& ctx);
BigReal pow10_hp(long e, const PrecisionContext& ctx);

// Decimal text round trip (scientific notation, explicit digit count).
std::string to_string(const BigReal& x, int significant_digits);
BigReal from_string(const std::string& s, const PrecisionContext& ctx);

} // namespace imspelab

#endif
