#include "imspelab/studies.hpp"

#include <algorithm>
#include <cmath>

#include "imspelab/parallel.hpp"

namespace imspelab {

const char* to_string(PhaseLabel label) {
    switch (label) {
        case PhaseLabel::FOUR_IN_LINE: return "FOUR_IN_LINE";
        case PhaseLabel::RHOMBOID_WITH_TWINS: return "RHOMBOID_WITH_TWINS";
        case PhaseLabel::RHOMBOID: return "RHOMBOID";
        case PhaseLabel::RECTANGLE: return "RECTANGLE";
        case PhaseLabel::SQUARE: return "SQUARE";
        default: return "UNCLASSIFIED";
    }
}

namespace {

// Splits 4 sorted values into clusters separated by more than tol; returns
// cluster means.
std::vector<double> clusters(std::vector<double> v, double tol) {
    std::sort(v.begin(), v.end());
    std::vector<double> means;
    size_t start = 0;
    for (size_t i = 1; i <= v.size(); ++i) {
        if (i == v.size() || v[i] - v[i - 1] > tol) {
            double s = 0.0;
            for (size_t j = start; j < i; ++j) s += v[j];
            means.push_back(s / static_cast<double>(i - start));
            start = i;
        }
    }
    return means;
}

} // namespace

PhaseLabel classify(const Design& design, double tol, double twin_tol) {
    if (design.n() != 4 || design.dim() != 2)
        throw UnsupportedError("classify: only N=4, D=2 designs are classifiable");
    double x[4], y[4];
    for (int i = 0; i < 4; ++i) {
        x[i] = design.at(i, 0).to_double();
        y[i] = design.at(i, 1).to_double();
    }
    auto sep = [&](int i, int j) {
        return std::max(std::fabs(x[i] - x[j]), std::fabs(y[i] - y[j]));
    };

    // Twin pair first: the tightest pair, if below twin_tol, dominates the
    // degenerate shapes the collapsed design would otherwise match.
    int ti = -1, tj = -1;
    double tsep = twin_tol;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (sep(i, j) < tsep) {
                tsep = sep(i, j);
                ti = i;
                tj = j;
            }
    if (ti >= 0) {
        int others[2], m = 0;
        for (int i = 0; i < 4; ++i)
            if (i != ti && i != tj) others[m++] = i;
        const int p = others[0], q = others[1];
        const double bx = (x[ti] + x[tj]) / 2, by = (y[ti] + y[tj]) / 2;
        const double mx = (x[p] + x[q]) / 2, my = (y[p] + y[q]) / 2;
        // Centered rhombus: the twins sit where the second diagonal's
        // vertices merged, so the remaining diagonal must bisect through the
        // twins' barycenter — and the remaining pair must not itself be a
        // twin pair.
        if (std::fabs(mx - bx) <= tol && std::fabs(my - by) <= tol &&
            sep(p, q) >= twin_tol)
            return PhaseLabel::RHOMBOID_WITH_TWINS;
    }

    // All four share one coordinate.
    for (int k = 0; k < 2; ++k) {
        const double* c = k == 0 ? x : y;
        const auto [mn, mx] = std::minmax_element(c, c + 4);
        if (*mx - *mn <= tol) return PhaseLabel::FOUR_IN_LINE;
    }

    // Centered axis-oriented 2x2 grid: {±a} x {±b}.
    const std::vector<double> cx = clusters({x[0], x[1], x[2], x[3]}, tol);
    const std::vector<double> cy = clusters({y[0], y[1], y[2], y[3]}, tol);
    if (cx.size() == 2 && cy.size() == 2 && std::fabs(cx[0] + cx[1]) <= tol &&
        std::fabs(cy[0] + cy[1]) <= tol) {
        bool seen[2][2] = {{false, false}, {false, false}};
        bool grid = true;
        for (int i = 0; i < 4; ++i) {
            const int gx = std::fabs(x[i] - cx[0]) <= std::fabs(x[i] - cx[1]) ? 0 : 1;
            const int gy = std::fabs(y[i] - cy[0]) <= std::fabs(y[i] - cy[1]) ? 0 : 1;
            if (seen[gx][gy]) {
                grid = false;
                break;
            }
            seen[gx][gy] = true;
        }
        if (grid) {
            const double sx = cx[1] - cx[0], sy = cy[1] - cy[0];
            return std::fabs(sx - sy) <= tol ? PhaseLabel::SQUARE
                                             : PhaseLabel::RECTANGLE;
        }
    }

    // Rhomboid: two points on each coordinate axis, symmetric, with unequal
    // diagonals.
    {
        std::vector<int> on_x1, on_x2;
        for (int i = 0; i < 4; ++i) {
            if (std::fabs(y[i]) <= tol) on_x1.push_back(i);
            else if (std::fabs(x[i]) <= tol) on_x2.push_back(i);
        }
        if (on_x1.size() == 2 && on_x2.size() == 2) {
            const double a0 = x[on_x1[0]], a1 = x[on_x1[1]];
            const double b0 = y[on_x2[0]], b1 = y[on_x2[1]];
            if (std::fabs(a0 + a1) <= tol && std::fabs(b0 + b1) <= tol) {
                const double da = std::fabs(a0 - a1), db = std::fabs(b0 - b1);
                if (std::fabs(da - db) > tol) return PhaseLabel::RHOMBOID;
            }
        }
    }
    return PhaseLabel::UNCLASSIFIED;
}

std::vector<PhaseRecord> phase_sweep(
    const std::vector<std::pair<BigReal, BigReal>>& theta_grid,
    const BigReal& sigma_z2, int n_starts, const SearchConfig& cfg,
    const PrecisionContext& ctx, int jobs, double tol, double twin_tol) {
    if (theta_grid.empty()) throw DomainError("phase_sweep: empty theta grid");
    std::vector<PhaseRecord> records(theta_grid.size());
    parallel_for(static_cast<long>(theta_grid.size()), jobs, [&](long g) {
        PhaseRecord& rec = records[static_cast<size_t>(g)];
        rec.theta1 = theta_grid[static_cast<size_t>(g)].first;
        rec.theta2 = theta_grid[static_cast<size_t>(g)].second;
        try {
            CovarianceParams params({rec.theta1, rec.theta2}, sigma_z2);
            SearchResult best = multistart(n_starts, 4, 2, params, cfg, ctx, 1);
            rec.design = best.design;
            rec.imspe = best.imspe;
            rec.label = classify(*best.design, tol, twin_tol);
            rec.ok = true;
        } catch (const Error& e) {
            rec.error = e.what();
            rec.label = PhaseLabel::UNCLASSIFIED;
        }
    });
    return records;
}

RectWidth rectangle_width(const std::vector<PhaseRecord>& scan) {
    RectWidth w;
    if (scan.empty()) return w;
    w.theta1 = scan.front().theta1;
    long first = -1, last = -1;
    for (size_t i = 0; i < scan.size(); ++i) {
        if (scan[i].ok && scan[i].label == PhaseLabel::RECTANGLE) {
            if (first < 0) first = static_cast<long>(i);
            last = static_cast<long>(i);
            ++w.n_rect;
        } else if (first >= 0) {
            break; // measure the first contiguous run only
        }
    }
    if (first <= 0 || last < 0 || last + 1 >= static_cast<long>(scan.size()))
        return w; // absent, or touching the scan edge: undefined
    auto mid = [](const BigReal& a, const BigReal& b) {
        return (a.to_double() + b.to_double()) / 2.0;
    };
    const double lo = mid(scan[static_cast<size_t>(first - 1)].theta2,
                          scan[static_cast<size_t>(first)].theta2);
    const double hi = mid(scan[static_cast<size_t>(last)].theta2,
                          scan[static_cast<size_t>(last + 1)].theta2);
    if (!(lo > 0) || !(hi > lo)) return w;
    w.log10_width = std::log10(hi) - std::log10(lo);
    w.defined = true;
    return w;
}

std::vector<ProfilePoint> twin_profile(const Design& base,
                                       const CovarianceParams& params, int axis,
                                       const std::vector<BigReal>& deltas,
                                       const PrecisionContext& ctx, int jobs) {
    if (!base.has_twin())
        throw DomainError("twin_profile: base design must carry a twin pair");
    if (axis < 1 || axis > base.dim())
        throw DomainError("twin_profile: axis out of range");
    for (size_t i = 0; i + 1 < deltas.size(); ++i)
        if (!(deltas[i] < deltas[i + 1]))
            throw DomainError("twin_profile: deltas must be strictly ascending");
    if (!deltas.empty() && deltas.front().sign() <= 0)
        throw DomainError("twin_profile: deltas must be positive");

    std::vector<ProfilePoint> points(deltas.size());
    parallel_for(static_cast<long>(deltas.size()), jobs, [&](long idx) {
        ProfilePoint& pt = points[static_cast<size_t>(idx)];
        pt.axis = axis;
        pt.delta = deltas[static_cast<size_t>(idx)];
        try {
            TwinSpec tw = base.twin();
            for (int k = 0; k < base.dim(); ++k)
                tw.delta[static_cast<size_t>(k)] =
                    (k == axis - 1) ? pt.delta : BigReal(ctx);
            const Design d = base.with_twin(std::move(tw));
            pt.imspe = imspe(d, params, ctx).imspe;
            pt.ok = true;
        } catch (const Error& e) {
            pt.error = e.what();
        }
    });
    return points;
}

BigReal richardson_limit(const std::vector<ProfilePoint>& profile,
                         const PrecisionContext& ctx) {
    std::vector<const ProfilePoint*> ok;
    for (const ProfilePoint& p : profile)
        if (p.ok) ok.push_back(&p);
    std::sort(ok.begin(), ok.end(),
              [](const ProfilePoint* a, const ProfilePoint* b) {
                  return a->delta < b->delta;
              });
    if (ok.size() < 3)
        throw DomainError("richardson_limit: need at least 3 evaluable points");
    // Solve I(d_i) = I0 + c2 d_i^2 + c4 d_i^4 for I0 on the three smallest
    // deltas (tiny Gaussian elimination; the system is far from singular for
    // distinct deltas).
    BigReal m[3][4] = {};
    for (int i = 0; i < 3; ++i) {
        const BigReal d2 = ok[static_cast<size_t>(i)]->delta * ok[static_cast<size_t>(i)]->delta;
        m[i][0] = BigReal(1, ctx);
        m[i][1] = d2;
        m[i][2] = d2 * d2;
        m[i][3] = ok[static_cast<size_t>(i)]->imspe;
    }
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (abs(m[r][c]) > abs(m[piv][c])) piv = r;
        for (int t = 0; t < 4; ++t) std::swap(m[c][t], m[piv][t]);
        if (m[c][c].is_zero())
            throw SingularMatrixError("richardson_limit: singular system", 0.0);
        for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            const BigReal f = m[r][c] / m[c][c];
            for (int t = c; t < 4; ++t) m[r][t] -= f * m[c][t];
        }
    }
    return m[0][3] / m[0][0];
}

double loglog_slope(const std::vector<ProfilePoint>& profile, const BigReal& limit) {
    std::vector<double> xs, ys;
    for (const ProfilePoint& p : profile) {
        if (!p.ok) continue;
        const BigReal gap = p.imspe - limit;
        if (gap.sign() <= 0) continue;
        xs.push_back(std::log10(p.delta.to_double()));
        ys.push_back(std::log10(gap.to_double()));
    }
    if (xs.size() < 2)
        throw DomainError("loglog_slope: need at least 2 points above the limit");
    double sx = 0, sy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / static_cast<double>(xs.size());
    const double my = sy / static_cast<double>(xs.size());
    double num = 0, den = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return num / den;
}

double quadratic_coefficient(const std::vector<ProfilePoint>& profile,
                             const BigReal& limit) {
    // Least squares of (imspe - limit) against delta^2 through the origin.
    double num = 0, den = 0;
    int used = 0;
    for (const ProfilePoint& p : profile) {
        if (!p.ok) continue;
        const double d2 = std::pow(p.delta.to_double(), 2);
        const double g = (p.imspe - limit).to_double();
        num += d2 * g;
        den += d2 * d2;
        ++used;
    }
    if (used < 1 || den == 0)
        throw DomainError("quadratic_coefficient: no usable points");
    return num / den;
}

std::vector<HueCell> hue_grid(const Design& base, const CovarianceParams& params,
                              int grid_n, const BigReal& reference_imspe,
                              const PrecisionContext& ctx, int jobs) {
    if (!base.has_twin())
        throw DomainError("hue_grid: base design must carry a twin pair");
    if (base.dim() != 2) throw UnsupportedError("hue_grid: D = 2 only");
    if (grid_n < 2) throw DomainError("hue_grid: grid_n must be >= 2");

    std::vector<HueCell> cells(static_cast<size_t>(grid_n) * grid_n);
    const BigReal& bx = base.twin().barycenter[0];
    const BigReal& by = base.twin().barycenter[1];
    parallel_for(static_cast<long>(cells.size()), jobs, [&](long idx) {
        HueCell& cell = cells[static_cast<size_t>(idx)];
        const int iu = static_cast<int>(idx) / grid_n;
        const int iv = static_cast<int>(idx) % grid_n;
        cell.u = -1.0 + 2.0 * static_cast<double>(iu) / (grid_n - 1);
        cell.v = -1.0 + 2.0 * static_cast<double>(iv) / (grid_n - 1);
        try {
            TwinSpec tw = base.twin();
            tw.delta[0] = BigReal(cell.u, ctx) - bx;
            tw.delta[1] = BigReal(cell.v, ctx) - by;
            if (tw.delta[0].is_zero() && tw.delta[1].is_zero()) {
                // The multivalued origin: resolved to the lowest value, the
                // exact -16 floor of the gap transform.
                cell.gap = BigReal(-16, ctx);
                cell.ok = true;
                return;
            }
            // Twin order is a symmetry; fix the offset sign so (u,v) and its
            // inversion produce bit-identical evaluations.
            const int lead = tw.delta[0].is_zero() ? tw.delta[1].sign()
                                                   : tw.delta[0].sign();
            if (lead < 0)
                for (BigReal& v : tw.delta) v = -v;
            const Design d = base.with_twin(std::move(tw));
            cell.gap = imspe_gap(d, params, reference_imspe, ctx);
            cell.ok = true;
        } catch (const Error& e) {
            cell.error = e.what();
        }
    });
    return cells;
}

double tornado_d(const std::vector<double>& coords, int n, int dim) {
    double best = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            best = std::max(best, std::fabs(coords[static_cast<size_t>(i) * dim] -
                                            coords[static_cast<size_t>(j) * dim]) /
                                      2.0);
    return best;
}

std::vector<TornadoPoint> tornado_data(const BaselineReport& report,
                                       const BigReal& reference_imspe,
                                       const PrecisionContext& ctx) {
    std::vector<TornadoPoint> points;
    points.reserve(report.samples.size());
    for (const BaselineSample& s : report.samples) {
        TornadoPoint p;
        p.index = s.index;
        if (!s.ok) {
            points.push_back(std::move(p));
            continue;
        }
        p.d = tornado_d(s.coords, report.n, report.dim);
        const BigReal arg = s.imspe - reference_imspe;
        if (arg.sign() > 0) {
            p.gap = log10_hp(arg, ctx);
            p.ok = true;
        }
        points.push_back(std::move(p));
    }
    return points;
}

} // namespace imspelab
