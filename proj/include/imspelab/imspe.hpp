#ifndef IMSPELAB_IMSPE_HPP
#define IMSPELAB_IMSPE_HPP

#include "imspelab/kernel.hpp"

namespace imspelab {

// Outcome of one certified IMSPE evaluation.
struct ImspeResult {
    BigReal imspe;      // IMSE / sigma_z^2 = 1 - tr(L^-1 R)
    int digits_used = 0;
    int escalations = 0;
    BigReal min_pivot;  // smallest |pivot| of the accepted factorization
};

// Evaluates IMSPE under the escalation ladder. Starting at ctx.digits, the
// evaluation is repeated at escalated precision whenever any certification
// fails:
//   - the linear solve reports a (near-)zero pivot or an uncertified residual,
//   - the computed value is nonpositive or non-finite,
//   - the trace accumulation loses more than the spare working digits to
//     cancellation (imspe must exceed 10^(digits_lost - digits), where
//     digits_lost = log10(max |summand| / imspe)),
//   - the pivot spread demands more digits than are in use
//     (digits >= 2 * log10(max_pivot / min_pivot)).
// Throws DegenerateDesignError for exactly duplicated non-twin points (or an
// exactly zero twin offset) and IllConditionedError when the ladder reaches
// max_digits without certification.
ImspeResult imspe(const Design& design, const CovarianceParams& params,
                  const PrecisionContext& ctx);

// Same, but the first rung reuses an already-populated KernelCache (the
// incremental path used by line searches). Higher rungs rebuild from
// cache.design() at escalated precision.
ImspeResult imspe(const KernelCache& cache);

// log10(imspe(design) - reference_imspe + 1e-16); the additive floor makes a
// zero gap read exactly -16.
BigReal imspe_gap(const Design& design, const CovarianceParams& params,
                  const BigReal& reference_imspe, const PrecisionContext& ctx);

} // namespace imspelab

#endif
