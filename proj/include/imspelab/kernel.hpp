#ifndef IMSPELAB_KERNEL_HPP
#define IMSPELAB_KERNEL_HPP

#include <vector>

#include "imspelab/design.hpp"
#include "imspelab/matrix.hpp"

namespace imspelab {

// Gaussian covariance between two points:
//   sigma_z^2 * exp(-sum_k theta_k (xi_k - xj_k)^2)
BigReal cov_entry(const std::vector<BigReal>& xi, const std::vector<BigReal>& xj,
                  const CovarianceParams& params, const PrecisionContext& ctx);

// (1/2) Int_{-1}^{1} exp(-theta (a-x)^2) dx
//   = sqrt(pi/(16 theta)) * (erf(sqrt(theta)(1+a)) + erf(sqrt(theta)(1-a)))
BigReal I1(const BigReal& theta_k, const BigReal& a, const PrecisionContext& ctx);

// (1/2) Int_{-1}^{1} exp(-theta ((a-x)^2 + (b-x)^2)) dx
//   = sqrt(pi/(32 theta)) * (erf(sqrt(2 theta)(1+m)) + erf(sqrt(2 theta)(1-m)))
//     * exp(-theta (a-b)^2 / 2),   m = (a+b)/2
BigReal I2(const BigReal& theta_k, const BigReal& a, const BigReal& b,
           const PrecisionContext& ctx);

// S_l(x) = sigma_z^{2l} prod_k sqrt(pi/(16 l theta_k))
//           * (erf(sqrt(l theta_k)(1+x_k)) + erf(sqrt(l theta_k)(1-x_k)))
// for l in {1, 2}.
BigReal S_l(const std::vector<BigReal>& x, const CovarianceParams& params, int l,
            const PrecisionContext& ctx);

// Incremental evaluator of the bordered matrices
//   L = [[0, sigma_z^2 1^T], [sigma_z^2 1, V]]       (V the covariance matrix)
//   R = [[1, S_1(x_j)^T], [S_1(x_i), S_2((x_i+x_j)/2) exp(-sum_k theta_k
//        (x_ik - x_jk)^2 / 2)]]
// used by the IMSPE trace formula. The erf/exp building blocks factor across
// dimensions, so the cache keeps one factor per (point-pair, dimension) and a
// coordinate move only refreshes the factors that mention it. assemble_* are
// the only routines that combine factors into entries, so every construction
// path produces bit-identical matrices.
//
// Twin handling: when the design carries a twin pair (rows N-2 and N-1), that
// pair's distance terms come from the offset vector directly
// (theta_k (2 delta_k)^2, never a subtraction of materialized coordinates)
// and its R midpoint is the barycenter itself.
class KernelCache {
public:
    KernelCache(Design design, const CovarianceParams& params,
                const PrecisionContext& ctx);

    const Design& design() const { return design_; }
    const CovarianceParams& params() const { return params_; }
    const PrecisionContext& ctx() const { return ctx_; }

    // Raw coordinate update; row i must not be a twin row.
    void set_coord(int i, int k, const BigReal& value);
    // Replace the whole twin parameterization (refreshes both twin rows).
    void set_twin(const TwinSpec& twin);
    // One-component twin moves; only dimension k factors are refreshed.
    void set_twin_barycenter(int k, const BigReal& value);
    void set_twin_delta(int k, const BigReal& value);

    void assemble_L(Mat& L) const;
    void assemble_R(Mat& R) const;

private:
    int pair_index(int i, int j) const; // i <= j
    void refresh_point_dim(int i, int k);
    void refresh_pair_dim(int i, int j, int k); // i <= j
    void refresh_all();
    void refresh_twin_rows_dim(int k);

    Design design_;
    CovarianceParams params_;
    PrecisionContext ctx_;

    // Per-dimension building blocks, N points, P = N(N+1)/2 unordered pairs
    // (diagonal included), row-major over the trailing dimension index.
    std::vector<BigReal> s1f_; // [i*D+k]  erf factor of S_1 at x_i
    std::vector<BigReal> s2f_; // [p*D+k]  erf factor of S_2 at the pair midpoint
    std::vector<BigReal> d2f_; // [p*D+k]  theta_k * (x_ik - x_jk)^2
};

// One-shot builders (convenience wrappers over KernelCache).
Mat build_L(const Design& design, const CovarianceParams& params,
            const PrecisionContext& ctx);
Mat build_R(const Design& design, const CovarianceParams& params,
            const PrecisionContext& ctx);

} // namespace imspelab

#endif
