#include "imspelab/bigreal.hpp"

#include <cstdio>
#include <vector>

namespace imspelab {

BigReal abs(const BigReal& x) {
    BigReal r = x;
    mpfr_abs(r.raw(), r.raw(), MPFR_RNDN);
    return r;
}

BigReal erf(const BigReal& x, const PrecisionContext& ctx) {
    if (!x.is_finite())
        throw DomainError("erf: non-finite input");
    BigReal r(ctx);
    mpfr_erf(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

BigReal exp_hp(const BigReal& x, const PrecisionContext& ctx) {
    if (!x.is_finite())
        throw DomainError("exp_hp: non-finite input");
    BigReal r(ctx);
    mpfr_exp(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

BigReal sqrt_hp(const BigReal& x, const PrecisionContext& ctx) {
    if (!x.is_finite())
        throw DomainError("sqrt_hp: non-finite input");
    if (x.sign() < 0)
        throw DomainError("sqrt_hp: negative input");
    BigReal r(ctx);
    mpfr_sqrt(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

BigReal log10_hp(const BigReal& x, const PrecisionContext& ctx) {
    if (!x.is_finite())
        throw DomainError("log10_hp: non-finite input");
    if (x.sign() <= 0)
        throw DomainError("log10_hp: nonpositive input");
    BigReal r(ctx);
    mpfr_log10(r.raw(), x.raw(), MPFR_RNDN);
    return r;
}

BigReal pi_hp(const PrecisionContext& ctx) {
    BigReal r(ctx);
    mpfr_const_pi(r.raw(), MPFR_RNDN);
    return r;
}

BigReal pow10_hp(long e, const PrecisionContext& ctx) {
    BigReal r(ctx);
    mpfr_set_si(r.raw(), 10, MPFR_RNDN);
    mpfr_pow_si(r.raw(), r.raw(), e, MPFR_RNDN);
    return r;
}

std::string to_string(const BigReal& x, int significant_digits) {
    if (significant_digits < 2) significant_digits = 2;
    // %.*Re prints one digit before the point plus (n-1) after.
    int frac = significant_digits - 1;
    char* out = nullptr;
    int n = mpfr_asprintf(&out, "%.*Re", frac, x.raw());
    if (n < 0) throw Error("to_string: formatting failed");
    std::string s(out);
    mpfr_free_str(out);
    return s;
}

BigReal from_string(const std::string& s, const PrecisionContext& ctx) {
    BigReal r(ctx);
    if (s.empty() || mpfr_set_str(r.raw(), s.c_str(), 10, MPFR_RNDN) != 0 || !r.is_finite())
        throw ParseError("not a finite decimal number: '" + s + "'");
    return r;
}

} // namespace imspelab
