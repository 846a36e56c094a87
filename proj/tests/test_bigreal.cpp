#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "imspelab/bigreal.hpp"
#include "imspelab/rng.hpp"
#include "oracle_quadrature.hpp"

using namespace imspelab;

namespace {

double rel_diff(const BigReal& a, const BigReal& b) {
    BigReal d = abs(a - b);
    BigReal m = abs(a);
    if (m.is_zero()) return d.to_double();
    return (d / m).to_double();
}

} // namespace

TEST_CASE("precision context escalation ladder") {
    PrecisionContext ctx(60, 960, 2);
    CHECK(ctx.digits() == 60);
    CHECK_FALSE(ctx.at_ceiling());
    PrecisionContext e1 = ctx.escalated();
    CHECK(e1.digits() == 120);
    PrecisionContext e = e1;
    for (int i = 0; i < 10 && !e.at_ceiling(); ++i) e = e.escalated();
    CHECK(e.digits() == 960);
    CHECK(e.at_ceiling());
    CHECK(ctx.prec_bits() >= 60 * 3.32);
    CHECK_THROWS_AS(PrecisionContext(8), DomainError);
    CHECK_THROWS_AS(PrecisionContext(60, 30), DomainError);
}

TEST_CASE("erf reference values") {
    PrecisionContext ctx(60);
    // erf(1), 50 digits.
    const std::string erf1 =
        "8.4270079294971486934122063508260925929606699796630e-1";
    CHECK(rel_diff(erf(BigReal(1, ctx), ctx), from_string(erf1, ctx)) < 1e-49);
    // erf(1/2), 40 digits.
    const std::string erf_half = "5.204998778130465376827466538919645287365e-1";
    CHECK(rel_diff(erf(BigReal(0.5, ctx), ctx), from_string(erf_half, ctx)) < 1e-38);
    // Far tail: 1 - erf(10) ~ 2.088e-45 must be resolved at 60 digits.
    BigReal tail = BigReal(1, ctx) - erf(BigReal(10, ctx), ctx);
    CHECK(tail.sign() > 0);
    CHECK(tail < from_string("1e-44", ctx));
    CHECK(from_string("1e-46", ctx) < tail);
}

TEST_CASE("erf is odd and strictly monotone") {
    PrecisionContext ctx(60);
    std::mt19937_64 g = substream(42, 0);
    double prev_x = -7.0;
    BigReal prev = erf(BigReal(prev_x, ctx), ctx);
    for (int i = 0; i < 200; ++i) {
        double x = -7.0 + 14.0 * (i + 1) / 201.0 + 1e-3 * u01(g);
        BigReal v = erf(BigReal(x, ctx), ctx);
        BigReal w = erf(BigReal(-x, ctx), ctx);
        CHECK((v + w).is_zero()); // odd, bit-exact under correct rounding
        CHECK(prev < v);          // strictly increasing
        prev = v;
        prev_x = x;
    }
}

TEST_CASE("erf agrees with an independent Taylor-series oracle") {
    PrecisionContext ctx(60);
    std::mt19937_64 g = substream(7, 1);
    for (int i = 0; i < 60; ++i) {
        double x = u11(g) * 5.0;
        BigReal xa(x, ctx);
        CHECK(rel_diff(erf(xa, ctx), oracle::erf_taylor(xa, ctx)) < 1e-55);
    }
}

TEST_CASE("dual-precision self-check: 30 vs 60 digits agree to 28 digits") {
    PrecisionContext lo(30), hi(60);
    std::mt19937_64 g = substream(3, 2);
    for (int i = 0; i < 1000; ++i) {
        double x = u11(g) * 4.0;
        BigReal vlo = erf(BigReal(x, lo), lo);
        BigReal vhi = erf(BigReal(x, hi), hi);
        CHECK(rel_diff(vlo.at(hi), vhi) < 1e-28);
    }
}

TEST_CASE("pi and exp/log/sqrt helpers") {
    PrecisionContext ctx(60);
    const std::string pi50 =
        "3.1415926535897932384626433832795028841971693993751";
    CHECK(rel_diff(pi_hp(ctx), from_string(pi50, ctx)) < 1e-49);
    CHECK(rel_diff(exp_hp(BigReal(1, ctx), ctx),
                   from_string("2.7182818284590452353602874713526624977572", ctx)) <
          1e-38);
    CHECK(rel_diff(log10_hp(BigReal(1000, ctx), ctx), BigReal(3, ctx)) < 1e-58);
    CHECK(rel_diff(sqrt_hp(BigReal(2, ctx), ctx),
                   from_string("1.4142135623730950488016887242096980785697", ctx)) <
          1e-38);
    CHECK(rel_diff(pow10_hp(-16, ctx), from_string("1e-16", ctx)) < 1e-58);
    CHECK_THROWS_AS(sqrt_hp(BigReal(-1, ctx), ctx), DomainError);
    CHECK_THROWS_AS(log10_hp(BigReal(0, ctx), ctx), DomainError);
}

TEST_CASE("to_string / from_string round trip") {
    PrecisionContext ctx(60);
    std::mt19937_64 g = substream(11, 3);
    for (int i = 0; i < 200; ++i) {
        double mant = u11(g);
        int ex = static_cast<int>(u11(g) * 30);
        BigReal v = BigReal(mant, ctx) * pow10_hp(ex, ctx);
        if (v.is_zero()) continue;
        std::string s = to_string(v, 40);
        BigReal back = from_string(s, ctx);
        CHECK(rel_diff(v, back) < 1e-38);
    }
    // A decimal literal survives format -> parse at matching width.
    BigReal v = from_string("-2.5e-3", ctx);
    CHECK(rel_diff(from_string(to_string(v, 20), ctx), v) < 1e-18);
}

TEST_CASE("from_string rejects malformed input") {
    PrecisionContext ctx(60);
    CHECK_THROWS_AS(from_string("", ctx), ParseError);
    CHECK_THROWS_AS(from_string("abc", ctx), ParseError);
    CHECK_THROWS_AS(from_string("1.2.3", ctx), ParseError);
    CHECK_THROWS_AS(from_string("1e", ctx), ParseError);
    CHECK_THROWS_AS(from_string("0x10", ctx), ParseError);
    CHECK_THROWS_AS(from_string("1.0 junk", ctx), ParseError);
}

TEST_CASE("operations run at the wider operand precision") {
    PrecisionContext lo(16), hi(120);
    BigReal a(1, lo);
    BigReal b = from_string("1e-30", hi);
    BigReal s = a + b;
    CHECK(s.prec_bits() == std::max(a.prec_bits(), b.prec_bits()));
    // The tiny addend must not be absorbed: (a + b) - a == b at 120 digits.
    CHECK(rel_diff(s - a.at(hi), b) < 1e-80);
}

TEST_CASE("non-finite propagation and formatting") {
    PrecisionContext ctx(60);
    BigReal nan; // default-constructed is NaN
    CHECK_FALSE(nan.is_finite());
    BigReal inf = BigReal(1, ctx) / BigReal(0, ctx);
    CHECK_FALSE(inf.is_finite());
    CHECK(to_string(BigReal(0, ctx), 20) == to_string(BigReal(0.0, ctx), 20));
}
