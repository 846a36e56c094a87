#ifndef IMSPELAB_SEARCH_HPP
#define IMSPELAB_SEARCH_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imspelab/imspe.hpp"

namespace imspelab {

struct SearchConfig {
    double coord_tol = 1e-10;    // per-coordinate convergence tolerance
    double obj_tol = 1e-20;      // per-sweep IMSPE improvement tolerance
    int max_sweeps = 200;
    int line_search_grid = 33;   // initial bracketing points per coordinate
    std::uint64_t rng_seed = 1;
    // Twin-pair bookkeeping: when two free points land within twin_merge_tol
    // in every coordinate the pair is re-parameterized as barycenter + offset;
    // if the offset later grows past twin_split_tol (max norm) the pair is
    // dissolved back to raw coordinates.
    double twin_merge_tol = 1e-5;
    double twin_split_tol = 1e-2;
};

struct SweepTrace {
    int sweep = 0;
    BigReal imspe; // best certified objective reached by the end of the sweep
};

struct SearchResult {
    std::optional<Design> design; // canonicalized optimum
    BigReal imspe;
    int sweeps = 0;
    bool converged = false;
    std::vector<SweepTrace> trace; // nonincreasing by construction
};

// Cyclic coordinate descent (point-major coordinate order). Each scalar
// coordinate is minimized over its feasible interval by a uniform-grid
// bracket (line_search_grid points plus the incumbent) followed by
// golden-section refinement to coord_tol; a move is accepted only if it
// strictly decreases the certified IMSPE. Candidates whose evaluation fails
// (ill-conditioning ceiling, exact-duplicate rejection, domain violations)
// are skipped. When the design holds a twin pair, the pair's four raw
// coordinates are replaced in the cycle by barycenter and offset components.
SearchResult ccd_minimize(const Design& initial, const CovarianceParams& params,
                          const SearchConfig& cfg, const PrecisionContext& ctx);

// Runs ccd_minimize from n_starts designs drawn uniformly on [-1,1]^(N*D)
// (substream k of cfg.rng_seed drives start k, coordinates point-major) and
// returns the best result; ties break to the lower start index. `jobs`
// parallelizes independent starts without affecting the result.
SearchResult multistart(int n_starts, int n, int d, const CovarianceParams& params,
                        const SearchConfig& cfg, const PrecisionContext& ctx,
                        int jobs = 1);

struct BaselineSample {
    long index = 0;
    std::vector<double> coords; // N x D row-major, exactly as drawn
    bool ok = false;
    BigReal imspe;      // valid when ok
    std::string error;  // set when !ok
};

struct BaselineReport {
    long n_samples = 0;
    int n = 0, dim = 0; // design shape shared by every sample
    long skipped = 0;
    long count_below_reference = 0;
    BigReal reference_imspe;
    BigReal min_gap; // min over ok samples of (imspe - reference)
    // Histogram of log10(gap + 1e-16) over [-16, 2], half-decade bins,
    // outliers clamped to the edge bins.
    std::vector<long> histogram;
    std::vector<BaselineSample> samples;
};
inline constexpr int kBaselineHistBins = 36;

// Evaluates n_samples uniform designs on [-1,1]^(N*D); substream k of `seed`
// drives sample k. Samples whose evaluation fails are recorded and skipped.
BaselineReport random_baseline(long n_samples, int n, int d,
                               const CovarianceParams& params,
                               const BigReal& reference_imspe, std::uint64_t seed,
                               const PrecisionContext& ctx, int jobs = 1);

// Unique orbit representative under the problem's symmetry group:
// per-coordinate sign flips, the coordinate swap when D = 2 and
// theta_1 = theta_2 exactly, and row permutation. Rows are sorted
// lexicographically after choosing the transform minimizing the sorted
// matrix; a twin pair stays in the trailing rows with its offset's first
// nonzero component made positive.
Design canonicalize(const Design& design, const CovarianceParams& params);

} // namespace imspelab

#endif
