#ifndef IMSPELAB_DESIGN_HPP
#define IMSPELAB_DESIGN_HPP

#include <optional>
#include <vector>

#include "imspelab/bigreal.hpp"

namespace imspelab {

// One twin pair, stored as barycenter + offset so the pair separation never
// goes through a subtraction of nearby coordinates. The twins occupy point
// rows N-2 and N-1 (0-based): row N-2 = barycenter + delta, row N-1 =
// barycenter - delta.
struct TwinSpec {
    std::vector<BigReal> barycenter; // size D
    std::vector<BigReal> delta;      // size D
};

// Vector of Gaussian covariance parameters plus process variance.
class CovarianceParams {
public:
    CovarianceParams(std::vector<BigReal> theta, BigReal sigma_z2);
    explicit CovarianceParams(std::vector<BigReal> theta);

    int dim() const { return static_cast<int>(theta_.size()); }
    const BigReal& theta(int k) const { return theta_[static_cast<size_t>(k)]; }
    const std::vector<BigReal>& theta() const { return theta_; }
    const BigReal& sigma_z2() const { return sigma_z2_; }

private:
    std::vector<BigReal> theta_;
    BigReal sigma_z2_;
};

// Ordered list of N points in [-1,1]^D, at most one twin pair. Coordinates
// are exact binary values; evaluation precision is supplied separately.
class Design {
public:
    // Explicit points, no twins. `points` is N x D row-major.
    Design(int n, int d, std::vector<BigReal> points);

    // First n-2 rows explicit, last two reconstituted from the twin spec.
    Design(int n, int d, std::vector<BigReal> leading_points, TwinSpec twin);

    int n() const { return n_; }
    int dim() const { return d_; }
    bool has_twin() const { return twin_.has_value(); }
    const TwinSpec& twin() const { return *twin_; }

    const BigReal& at(int i, int k) const {
        return pts_[static_cast<size_t>(i) * d_ + k];
    }
    std::vector<BigReal> point(int i) const;

    // Copy with one raw coordinate replaced (drops nothing else).
    Design with_coord(int i, int k, const BigReal& value) const;
    // Copies with the twin parameterization updated.
    Design with_twin(TwinSpec twin) const;
    Design without_twin() const;

    // true if non-twin rows i and j are exactly equal in every coordinate.
    bool exact_duplicate(int i, int j) const;

private:
    void validate() const;

    int n_, d_;
    std::vector<BigReal> pts_;        // N x D, twin rows materialized
    std::optional<TwinSpec> twin_;
};

} // namespace imspelab

#endif
