#include "imspelab/kernel.hpp"

#include <utility>

namespace imspelab {

namespace {

BigReal sq(const BigReal& x) { return x * x; }

// sqrt(pi/(16 l theta)) * (erf(sqrt(l theta)(1+c)) + erf(sqrt(l theta)(1-c)))
// -- the one-dimensional erf factor shared by S_1, S_2, I1 and I2. Every
// caller goes through here so the operation order (hence rounding) is fixed.
BigReal dim_s_factor(int l, const BigReal& theta_k, const BigReal& c,
                     const PrecisionContext& ctx) {
    const BigReal one(1, ctx);
    const BigReal lt = BigReal(l, ctx) * theta_k;
    const BigReal rt = sqrt_hp(lt, ctx);
    const BigReal pref = sqrt_hp(pi_hp(ctx) / (BigReal(16 * l, ctx) * theta_k), ctx);
    const BigReal e_plus = erf(rt * (one + c), ctx);
    const BigReal e_minus = erf(rt * (one - c), ctx);
    return pref * (e_plus + e_minus);
}

// theta_k * (xi_k - xj_k)^2
BigReal dim_dist_term(const BigReal& theta_k, const BigReal& xi_k,
                      const BigReal& xj_k) {
    return theta_k * sq(xi_k - xj_k);
}

// theta_k * (2 delta_k)^2, the twin-pair distance term taken from the offset
// itself. delta_k + delta_k is exact, so no significance is lost however
// small the separation is.
BigReal twin_dist_term(const BigReal& theta_k, const BigReal& delta_k) {
    return theta_k * sq(delta_k + delta_k);
}

BigReal s_assemble(const CovarianceParams& params, int l, const BigReal* factors,
                   int d) {
    BigReal acc = params.sigma_z2();
    if (l == 2) acc *= params.sigma_z2();
    for (int k = 0; k < d; ++k) acc *= factors[k];
    return acc;
}

BigReal exponent_assemble(const BigReal* terms, int d, const PrecisionContext& ctx) {
    BigReal expo(ctx);
    for (int k = 0; k < d; ++k) expo += terms[k];
    return expo;
}

void check_params_dim(const Design& design, const CovarianceParams& params) {
    if (design.dim() != params.dim())
        throw DomainError("kernel: design dimension does not match theta dimension");
}

} // namespace

BigReal cov_entry(const std::vector<BigReal>& xi, const std::vector<BigReal>& xj,
                  const CovarianceParams& params, const PrecisionContext& ctx) {
    const int d = params.dim();
    if (static_cast<int>(xi.size()) != d || static_cast<int>(xj.size()) != d)
        throw DomainError("cov_entry: point dimension does not match theta dimension");
    std::vector<BigReal> terms;
    terms.reserve(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k)
        terms.push_back(dim_dist_term(params.theta(k), xi[static_cast<size_t>(k)],
                                      xj[static_cast<size_t>(k)]));
    const BigReal expo = exponent_assemble(terms.data(), d, ctx);
    return params.sigma_z2() * exp_hp(-expo, ctx);
}

BigReal I1(const BigReal& theta_k, const BigReal& a, const PrecisionContext& ctx) {
    if (theta_k.sign() <= 0) throw DomainError("I1: theta must be positive");
    return dim_s_factor(1, theta_k, a, ctx);
}

BigReal I2(const BigReal& theta_k, const BigReal& a, const BigReal& b,
           const PrecisionContext& ctx) {
    if (theta_k.sign() <= 0) throw DomainError("I2: theta must be positive");
    const BigReal two(2, ctx);
    const BigReal mid = (a + b) / two;
    const BigReal factor = dim_s_factor(2, theta_k, mid, ctx);
    const BigReal term = dim_dist_term(theta_k, a, b);
    return factor * exp_hp(-(term / two), ctx);
}

BigReal S_l(const std::vector<BigReal>& x, const CovarianceParams& params, int l,
            const PrecisionContext& ctx) {
    if (l != 1 && l != 2) throw DomainError("S_l: l must be 1 or 2");
    const int d = params.dim();
    if (static_cast<int>(x.size()) != d)
        throw DomainError("S_l: point dimension does not match theta dimension");
    std::vector<BigReal> factors;
    factors.reserve(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k)
        factors.push_back(dim_s_factor(l, params.theta(k), x[static_cast<size_t>(k)], ctx));
    return s_assemble(params, l, factors.data(), d);
}

KernelCache::KernelCache(Design design, const CovarianceParams& params,
                         const PrecisionContext& ctx)
    : design_(std::move(design)), params_(params), ctx_(ctx) {
    check_params_dim(design_, params_);
    const int n = design_.n();
    const int d = design_.dim();
    const size_t np = static_cast<size_t>(n) * d;
    const size_t pp = static_cast<size_t>(n) * (n + 1) / 2 * d;
    s1f_.assign(np, BigReal(ctx_));
    s2f_.assign(pp, BigReal(ctx_));
    d2f_.assign(pp, BigReal(ctx_));
    refresh_all();
}

int KernelCache::pair_index(int i, int j) const {
    const int n = design_.n();
    return i * n - i * (i - 1) / 2 + (j - i);
}

void KernelCache::refresh_point_dim(int i, int k) {
    const int d = design_.dim();
    s1f_[static_cast<size_t>(i) * d + k] =
        dim_s_factor(1, params_.theta(k), design_.at(i, k), ctx_);
}

void KernelCache::refresh_pair_dim(int i, int j, int k) {
    const int d = design_.dim();
    const size_t at = static_cast<size_t>(pair_index(i, j)) * d + k;
    const bool twin_pair =
        design_.has_twin() && i == design_.n() - 2 && j == design_.n() - 1;
    if (twin_pair) {
        const TwinSpec& tw = design_.twin();
        s2f_[at] = dim_s_factor(2, params_.theta(k),
                                tw.barycenter[static_cast<size_t>(k)], ctx_);
        d2f_[at] = twin_dist_term(params_.theta(k), tw.delta[static_cast<size_t>(k)]);
    } else {
        const BigReal two(2, ctx_);
        const BigReal mid = (design_.at(i, k) + design_.at(j, k)) / two;
        s2f_[at] = dim_s_factor(2, params_.theta(k), mid, ctx_);
        d2f_[at] = dim_dist_term(params_.theta(k), design_.at(i, k), design_.at(j, k));
    }
}

void KernelCache::refresh_all() {
    const int n = design_.n();
    const int d = design_.dim();
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < d; ++k) refresh_point_dim(i, k);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            for (int k = 0; k < d; ++k) refresh_pair_dim(i, j, k);
}

void KernelCache::refresh_twin_rows_dim(int k) {
    const int n = design_.n();
    const int a = n - 2;
    const int b = n - 1;
    refresh_point_dim(a, k);
    refresh_point_dim(b, k);
    for (int i = 0; i <= a; ++i) refresh_pair_dim(i, a, k);
    for (int i = 0; i <= b; ++i) refresh_pair_dim(i, b, k);
    // (a, b) itself is covered by the second loop at i == a.
}

void KernelCache::set_coord(int i, int k, const BigReal& value) {
    design_ = design_.with_coord(i, k, value);
    const int n = design_.n();
    refresh_point_dim(i, k);
    for (int j = 0; j < n; ++j)
        refresh_pair_dim(j < i ? j : i, j < i ? i : j, k);
}

void KernelCache::set_twin(const TwinSpec& twin) {
    design_ = design_.with_twin(twin);
    for (int k = 0; k < design_.dim(); ++k) refresh_twin_rows_dim(k);
}

void KernelCache::set_twin_barycenter(int k, const BigReal& value) {
    TwinSpec tw = design_.twin();
    tw.barycenter[static_cast<size_t>(k)] = value;
    design_ = design_.with_twin(std::move(tw));
    refresh_twin_rows_dim(k);
}

void KernelCache::set_twin_delta(int k, const BigReal& value) {
    TwinSpec tw = design_.twin();
    tw.delta[static_cast<size_t>(k)] = value;
    design_ = design_.with_twin(std::move(tw));
    refresh_twin_rows_dim(k);
}

void KernelCache::assemble_L(Mat& L) const {
    const int n = design_.n();
    const int d = design_.dim();
    if (L.rows() != n + 1 || L.cols() != n + 1)
        throw DomainError("assemble_L: matrix must be (N+1) x (N+1)");
    L.at(0, 0) = BigReal(ctx_);
    for (int i = 0; i < n; ++i) {
        L.at(0, i + 1) = params_.sigma_z2().at(ctx_);
        L.at(i + 1, 0) = L.at(0, i + 1);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const size_t p = static_cast<size_t>(pair_index(i, j)) * d;
            const BigReal expo = exponent_assemble(&d2f_[p], d, ctx_);
            const BigReal e = params_.sigma_z2() * exp_hp(-expo, ctx_);
            L.at(i + 1, j + 1) = e;
            L.at(j + 1, i + 1) = e;
        }
    }
}

void KernelCache::assemble_R(Mat& R) const {
    const int n = design_.n();
    const int d = design_.dim();
    if (R.rows() != n + 1 || R.cols() != n + 1)
        throw DomainError("assemble_R: matrix must be (N+1) x (N+1)");
    const BigReal two(2, ctx_);
    R.at(0, 0) = BigReal(1, ctx_);
    for (int i = 0; i < n; ++i) {
        const BigReal s1 =
            s_assemble(params_, 1, &s1f_[static_cast<size_t>(i) * d], d);
        R.at(0, i + 1) = s1;
        R.at(i + 1, 0) = s1;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const size_t p = static_cast<size_t>(pair_index(i, j)) * d;
            const BigReal s2 = s_assemble(params_, 2, &s2f_[p], d);
            const BigReal expo = exponent_assemble(&d2f_[p], d, ctx_);
            const BigReal e = s2 * exp_hp(-(expo / two), ctx_);
            R.at(i + 1, j + 1) = e;
            R.at(j + 1, i + 1) = e;
        }
    }
}

Mat build_L(const Design& design, const CovarianceParams& params,
            const PrecisionContext& ctx) {
    KernelCache cache(design, params, ctx);
    Mat L(design.n() + 1, design.n() + 1, ctx);
    cache.assemble_L(L);
    return L;
}

Mat build_R(const Design& design, const CovarianceParams& params,
            const PrecisionContext& ctx) {
    KernelCache cache(design, params, ctx);
    Mat R(design.n() + 1, design.n() + 1, ctx);
    cache.assemble_R(R);
    return R;
}

} // namespace imspelab
