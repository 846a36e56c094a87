#include "imspelab/design.hpp"

#include <string>

namespace imspelab {

CovarianceParams::CovarianceParams(std::vector<BigReal> theta, BigReal sigma_z2)
    : theta_(std::move(theta)), sigma_z2_(std::move(sigma_z2)) {
    if (theta_.empty())
        throw DomainError("CovarianceParams: empty theta");
    for (const auto& t : theta_)
        if (!t.is_finite() || t.sign() <= 0)
            throw DomainError("CovarianceParams: theta must be strictly positive");
    if (!sigma_z2_.is_finite() || sigma_z2_.sign() <= 0)
        throw DomainError("CovarianceParams: sigma_z2 must be positive");
}

CovarianceParams::CovarianceParams(std::vector<BigReal> theta)
    : CovarianceParams(std::move(theta),
                       BigReal(1, PrecisionContext(60))) {}

namespace {

// Materialization precision for barycenter +/- delta: wide enough that the
// stored rows agree with the exact sum at the operands' working precision.
PrecisionContext widest_ctx(const TwinSpec& t) {
    mpfr_prec_t p = 64;
    for (const auto& v : t.barycenter) p = std::max(p, v.prec_bits());
    for (const auto& v : t.delta) p = std::max(p, v.prec_bits());
    int digits = static_cast<int>(p * 1000 / 3322) + 8;
    if (digits < 16) digits = 16;
    return PrecisionContext(digits, digits < 960 ? 960 : digits);
}

} // namespace

Design::Design(int n, int d, std::vector<BigReal> points)
    : n_(n), d_(d), pts_(std::move(points)) {
    if (pts_.size() != static_cast<size_t>(n_) * d_)
        throw DomainError("Design: wrong number of coordinates");
    validate();
}

Design::Design(int n, int d, std::vector<BigReal> leading_points, TwinSpec twin)
    : n_(n), d_(d), pts_(std::move(leading_points)), twin_(std::move(twin)) {
    if (n_ < 2)
        throw DomainError("Design: twin pair needs N >= 2");
    if (twin_->barycenter.size() != static_cast<size_t>(d_) ||
        twin_->delta.size() != static_cast<size_t>(d_))
        throw DomainError("Design: twin spec dimension mismatch");
    if (pts_.size() != static_cast<size_t>(n_ - 2) * d_)
        throw DomainError("Design: wrong number of leading coordinates");
    PrecisionContext mat = widest_ctx(*twin_);
    for (int k = 0; k < d_; ++k)
        pts_.push_back(twin_->barycenter[k].at(mat) + twin_->delta[k].at(mat));
    for (int k = 0; k < d_; ++k)
        pts_.push_back(twin_->barycenter[k].at(mat) - twin_->delta[k].at(mat));
    validate();
}

void Design::validate() const {
    if (n_ < 1 || d_ < 1)
        throw DomainError("Design: need N >= 1, D >= 1");
    const BigReal one(1, PrecisionContext(16));
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < d_; ++k) {
            const BigReal& x = at(i, k);
            if (!x.is_finite())
                throw DomainError("Design: non-finite coordinate at point " +
                                  std::to_string(i + 1));
            if (abs(x) > one)
                throw DomainError("Design: coordinate " + std::to_string(k + 1) +
                                  " of point " + std::to_string(i + 1) +
                                  " outside [-1,1]");
        }
}

std::vector<BigReal> Design::point(int i) const {
    std::vector<BigReal> p;
    p.reserve(d_);
    for (int k = 0; k < d_; ++k) p.push_back(at(i, k));
    return p;
}

Design Design::with_coord(int i, int k, const BigReal& value) const {
    if (twin_ && i >= n_ - 2)
        throw DomainError("Design: twin rows must be updated through with_twin");
    Design copy = *this;
    copy.pts_[static_cast<size_t>(i) * d_ + k] = value;
    copy.validate();
    return copy;
}

Design Design::with_twin(TwinSpec twin) const {
    std::vector<BigReal> lead(pts_.begin(), pts_.begin() + static_cast<size_t>(n_ - 2) * d_);
    return Design(n_, d_, std::move(lead), std::move(twin));
}

Design Design::without_twin() const {
    Design copy = *this;
    copy.twin_.reset();
    return copy;
}

bool Design::exact_duplicate(int i, int j) const {
    for (int k = 0; k < d_; ++k)
        if (at(i, k) != at(j, k)) return false;
    return true;
}

} // namespace imspelab
