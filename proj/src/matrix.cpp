#include "imspelab/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace imspelab {

namespace {

struct LuFactors {
    Mat lu;
    std::vector<int> perm;
    double min_pivot;
    double max_pivot;
};

double max_abs_entry(const Mat& m) {
    double mx = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            mx = std::max(mx, abs(m.at(i, j)).to_double());
    return mx;
}

LuFactors lu_factor(const Mat& M, const PrecisionContext& ctx) {
    const int n = M.rows();
    LuFactors f{M, std::vector<int>(n), 1e300, 0.0};
    for (int i = 0; i < n; ++i) f.perm[i] = i;

    const double scale = std::max(1.0, max_abs_entry(M));
    const double zero_tol = scale * std::pow(10.0, -ctx.digits() + 4);

    for (int k = 0; k < n; ++k) {
        int p = k;
        BigReal best = abs(f.lu.at(k, k));
        for (int r = k + 1; r < n; ++r) {
            BigReal cand = abs(f.lu.at(r, k));
            if (cand > best) { best = cand; p = r; }
        }
        const double pv = best.to_double();
        if (!(pv > zero_tol))
            throw SingularMatrixError(
                "solve_sym: zero pivot at step " + std::to_string(k) +
                " (|pivot| = " + std::to_string(pv) + ")", pv);
        if (p != k) {
            for (int c = 0; c < n; ++c) std::swap(f.lu.at(k, c), f.lu.at(p, c));
            std::swap(f.perm[k], f.perm[p]);
        }
        f.min_pivot = std::min(f.min_pivot, pv);
        f.max_pivot = std::max(f.max_pivot, pv);
        for (int r = k + 1; r < n; ++r) {
            BigReal m = f.lu.at(r, k) / f.lu.at(k, k);
            f.lu.at(r, k) = m;
            for (int c = k + 1; c < n; ++c)
                f.lu.at(r, c) -= m * f.lu.at(k, c);
        }
    }
    return f;
}

Mat lu_solve(const LuFactors& f, const Mat& B, const PrecisionContext& ctx) {
    const int n = f.lu.rows();
    Mat X(n, B.cols(), ctx);
    for (int c = 0; c < B.cols(); ++c) {
        for (int i = 0; i < n; ++i) X.at(i, c) = B.at(f.perm[i], c);
        for (int i = 1; i < n; ++i)
            for (int j = 0; j < i; ++j)
                X.at(i, c) -= f.lu.at(i, j) * X.at(j, c);
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j)
                X.at(i, c) -= f.lu.at(i, j) * X.at(j, c);
            X.at(i, c) = X.at(i, c) / f.lu.at(i, i);
        }
    }
    return X;
}

Mat residual_of(const Mat& M, const Mat& X, const Mat& B, const PrecisionContext& ctx) {
    const int n = M.rows();
    Mat R(n, B.cols(), ctx);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c < B.cols(); ++c) {
            BigReal acc = B.at(i, c);
            for (int j = 0; j < n; ++j)
                acc -= M.at(i, j) * X.at(j, c);
            R.at(i, c) = acc;
        }
    return R;
}

} // namespace

Mat solve_sym(const Mat& M, const Mat& B, const PrecisionContext& ctx, SolveInfo* info) {
    if (M.rows() != M.cols())
        throw DomainError("solve_sym: matrix not square");
    if (B.rows() != M.rows())
        throw DomainError("solve_sym: dimension mismatch");

    LuFactors f = lu_factor(M, ctx);
    Mat X = lu_solve(f, B, ctx);

    const double res_tol =
        std::max(1.0, max_abs_entry(B)) * std::pow(10.0, -ctx.digits() / 2.0);

    Mat R = residual_of(M, X, B, ctx);
    double res = max_abs_entry(R);
    int refinements = 0;
    if (res > res_tol) {
        Mat dX = lu_solve(f, R, ctx);
        for (int i = 0; i < X.rows(); ++i)
            for (int c = 0; c < X.cols(); ++c)
                X.at(i, c) += dX.at(i, c);
        R = residual_of(M, X, B, ctx);
        res = max_abs_entry(R);
        refinements = 1;
        if (res > res_tol)
            throw SingularMatrixError(
                "solve_sym: residual " + std::to_string(res) +
                " not certifiable at " + std::to_string(ctx.digits()) + " digits",
                f.min_pivot);
    }

    if (info) {
        info->min_pivot = f.min_pivot;
        info->max_pivot = f.max_pivot;
        info->residual = res;
        info->refinements = refinements;
    }
    return X;
}

} // namespace imspelab
