#include "imspelab/imspe.hpp"

#include <cmath>
#include <optional>
#include <string>

namespace imspelab {

namespace {

void reject_degenerate(const Design& design) {
    const int n = design.n();
    const int twin_a = design.has_twin() ? n - 2 : n;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (i >= twin_a && j >= twin_a) continue; // the twin pair itself
            if (design.exact_duplicate(i, j))
                throw DegenerateDesignError(
                    "imspe: points " + std::to_string(i) + " and " + std::to_string(j) +
                    " coincide exactly");
        }
    }
    if (design.has_twin()) {
        bool all_zero = true;
        for (const BigReal& dk : design.twin().delta)
            if (!dk.is_zero()) { all_zero = false; break; }
        if (all_zero)
            throw DegenerateDesignError("imspe: twin offset is exactly zero");
    }
}

struct Rung {
    bool certified = false;
    BigReal value;
    SolveInfo info;
    std::string why; // reason certification failed (empty if certified)
};

Rung evaluate_rung(const KernelCache& cache) {
    const PrecisionContext& ctx = cache.ctx();
    const int n1 = cache.design().n() + 1;
    Rung r;
    Mat L(n1, n1, ctx), R(n1, n1, ctx);
    cache.assemble_L(L);
    cache.assemble_R(R);
    Mat X(n1, n1, ctx);
    try {
        X = solve_sym(L, R, ctx, &r.info);
    } catch (const SingularMatrixError& e) {
        r.info.min_pivot = e.pivot;
        r.why = e.what();
        return r;
    }

    BigReal trace(ctx);
    double max_summand = 1.0; // the leading 1 of (1 - trace) is a summand too
    for (int i = 0; i < n1; ++i) {
        trace += X.at(i, i);
        const double s = std::fabs(X.at(i, i).to_double());
        if (s > max_summand) max_summand = s;
    }
    r.value = BigReal(1, ctx) - trace;

    if (!r.value.is_finite()) {
        r.why = "non-finite imspe";
        return r;
    }
    const double v = r.value.to_double();
    if (v <= 0.0) {
        r.why = "nonpositive imspe (cancellation)";
        return r;
    }
    // Cancellation rule: imspe must exceed 10^(digits_lost - digits), or the
    // trace difference carried no trustworthy digits at this precision.
    const double digits_lost = std::log10(max_summand / v);
    if (std::log10(v) <= digits_lost - ctx.digits()) {
        r.why = "trace cancellation exceeds working precision";
        return r;
    }
    // Pivot-spread rule: an LU forward error of order (max_pivot / min_pivot)
    // * 10^-digits can pass every residual check (the solution components the
    // trace uses stay O(1)), so demand a precision margin proportional to the
    // spread.
    const double spread_digits =
        2.0 * std::log10(r.info.max_pivot / r.info.min_pivot);
    if (static_cast<double>(ctx.digits()) < spread_digits) {
        r.why = "pivot spread requires more digits";
        return r;
    }
    r.certified = true;
    return r;
}

ImspeResult run_ladder(const KernelCache& first) {
    reject_degenerate(first.design());
    PrecisionContext ctx = first.ctx();
    int escalations = 0;
    double last_min_pivot = 0.0;
    std::string last_why;
    for (;;) {
        Rung r;
        if (escalations == 0) {
            r = evaluate_rung(first);
        } else {
            KernelCache rebuilt(first.design(), first.params(), ctx);
            r = evaluate_rung(rebuilt);
        }
        if (r.certified) {
            ImspeResult out;
            out.imspe = r.value;
            out.digits_used = ctx.digits();
            out.escalations = escalations;
            out.min_pivot = BigReal(r.info.min_pivot, ctx);
            return out;
        }
        last_min_pivot = r.info.min_pivot;
        last_why = r.why;
        if (ctx.at_ceiling())
            throw IllConditionedError(
                "imspe: uncertifiable at " + std::to_string(ctx.digits()) +
                    " digits (" + last_why + ")",
                ctx.digits(), last_min_pivot);
        ctx = ctx.escalated();
        ++escalations;
    }
}

} // namespace

ImspeResult imspe(const Design& design, const CovarianceParams& params,
                  const PrecisionContext& ctx) {
    return run_ladder(KernelCache(design, params, ctx));
}

ImspeResult imspe(const KernelCache& cache) { return run_ladder(cache); }

BigReal imspe_gap(const Design& design, const CovarianceParams& params,
                  const BigReal& reference_imspe, const PrecisionContext& ctx) {
    const ImspeResult r = imspe(design, params, ctx);
    const BigReal arg = r.imspe - reference_imspe + pow10_hp(-16, ctx);
    if (arg.sign() <= 0)
        throw DomainError("imspe_gap: gap below -1e-16 (design beats the reference)");
    return log10_hp(arg, ctx);
}

} // namespace imspelab
