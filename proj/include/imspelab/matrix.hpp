#ifndef IMSPELAB_MATRIX_HPP
#define IMSPELAB_MATRIX_HPP

#include <vector>

#include "imspelab/bigreal.hpp"

namespace imspelab {

// Small dense matrix of BigReal. Row-major. Sized for bordered covariance
// systems ((N+1) x (N+1)); nothing here is tuned for large N.
class Mat {
public:
    Mat(int rows, int cols, const PrecisionContext& ctx)
        : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, BigReal(ctx)) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    BigReal& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const BigReal& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    static Mat identity(int n, const PrecisionContext& ctx) {
        Mat m(n, n, ctx);
        for (int i = 0; i < n; ++i) m.at(i, i) = BigReal(1, ctx);
        return m;
    }

private:
    int rows_, cols_;
    std::vector<BigReal> a_;
};

struct SolveInfo {
    double min_pivot = 0.0;   // smallest |pivot| seen in the factorization
    double max_pivot = 0.0;
    double residual = 0.0;    // max-norm residual of M*X - B after the solve
    int refinements = 0;
};

// Solves M*X = B for symmetric M via LU with partial pivoting (never explicit
// inversion). Certifies the result: if a pivot falls below 10^(-digits+4)
// (scaled by the matrix magnitude) or the residual cannot be brought under
// 10^(-digits/2) with one refinement pass, throws SingularMatrixError so the
// caller can escalate precision.
Mat solve_sym(const Mat& M, const Mat& B, const PrecisionContext& ctx,
              SolveInfo* info = nullptr);

} // namespace imspelab

#endif
