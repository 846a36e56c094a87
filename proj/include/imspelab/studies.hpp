#ifndef IMSPELAB_STUDIES_HPP
#define IMSPELAB_STUDIES_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "imspelab/search.hpp"

namespace imspelab {

enum class PhaseLabel {
    FOUR_IN_LINE,
    RHOMBOID_WITH_TWINS,
    RHOMBOID,
    RECTANGLE,
    SQUARE,
    UNCLASSIFIED,
};
const char* to_string(PhaseLabel label);

// Geometric phase of a canonicalized N=4, D=2 design. Checks are ordered so
// that a genuine twin pair is recognized before the degenerate shapes it
// collapses into: a twin pair tighter than twin_tol plus two opposite points
// whose midpoint matches the twins' barycenter is RHOMBOID_WITH_TWINS even
// though all four points may also "share one coordinate within tol".
PhaseLabel classify(const Design& design, double tol = 1e-5, double twin_tol = 1e-3);

struct PhaseRecord {
    BigReal theta1, theta2;
    bool ok = false;
    std::string error;
    std::optional<Design> design; // multistart optimum (canonical)
    BigReal imspe;
    PhaseLabel label = PhaseLabel::UNCLASSIFIED;
};

// Multistart search + classification over a theta grid (records in grid
// order; per-point failures are recorded as UNCLASSIFIED and the sweep
// continues). Every grid point reuses cfg.rng_seed, so the same start
// designs probe every theta.
std::vector<PhaseRecord> phase_sweep(
    const std::vector<std::pair<BigReal, BigReal>>& theta_grid,
    const BigReal& sigma_z2, int n_starts, const SearchConfig& cfg,
    const PrecisionContext& ctx, int jobs = 1, double tol = 1e-5,
    double twin_tol = 1e-3);

// Conjectured "bird's beak": the log10-theta2 width of the RECTANGLE phase
// along one constant-theta1 scan (records must share theta1, ascending
// theta2). Boundaries are midpoints between adjacent differing labels;
// undefined when the rectangle run is absent or touches the scan edge.
struct RectWidth {
    BigReal theta1;
    int n_rect = 0;
    double log10_width = 0.0;
    bool defined = false;
};
RectWidth rectangle_width(const std::vector<PhaseRecord>& scan);

struct ProfilePoint {
    int axis = 0;     // 1-based coordinate index of the twin offset
    BigReal delta;    // twin half-separation
    bool ok = false;
    BigReal imspe;
    std::string error;
};

// IMSPE as a function of twin separation: for each delta, the base design's
// twin offset is set to delta along `axis` (zero along the others),
// barycenter and free points held fixed.
std::vector<ProfilePoint> twin_profile(const Design& base,
                                       const CovarianceParams& params, int axis,
                                       const std::vector<BigReal>& deltas,
                                       const PrecisionContext& ctx, int jobs = 1);

// Zero-separation limit by Richardson extrapolation from the three smallest
// deltas, assuming the even expansion I(delta) = I0 + c2 delta^2 + c4 delta^4.
BigReal richardson_limit(const std::vector<ProfilePoint>& profile,
                         const PrecisionContext& ctx);

// Least-squares slope of log10(imspe - limit) vs log10(delta) over the ok
// points with imspe > limit.
double loglog_slope(const std::vector<ProfilePoint>& profile, const BigReal& limit);

// Quadratic coefficient sign probe: fits imspe ~ a + c * delta^2 by least
// squares and returns c (in double, adequate for a sign/curvature check).
double quadratic_coefficient(const std::vector<ProfilePoint>& profile,
                             const BigReal& limit);

struct HueCell {
    double u = 0.0, v = 0.0;
    bool ok = false;
    BigReal gap;       // log10(imspe - reference + 1e-16)
    std::string error;
};

// Hue-plot data: one twin roams the grid node (u, v), the other is its
// inversion through the base twin barycenter; the node exactly at the
// barycenter is the multivalued origin, resolved to the lowest value (-16).
// Row-major: u varies over rows, v over columns.
std::vector<HueCell> hue_grid(const Design& base, const CovarianceParams& params,
                              int grid_n, const BigReal& reference_imspe,
                              const PrecisionContext& ctx, int jobs = 1);

struct TornadoPoint {
    long index = 0;
    double d = 0.0; // max over point pairs of |x_i1 - x_j1| / 2
    bool ok = false;
    BigReal gap;    // log10(imspe - reference), no additive floor
};

// The tornado funnel statistic for one design's flattened coordinates.
double tornado_d(const std::vector<double>& coords, int n, int dim);

std::vector<TornadoPoint> tornado_data(const BaselineReport& report,
                                       const BigReal& reference_imspe,
                                       const PrecisionContext& ctx);

} // namespace imspelab

#endif
