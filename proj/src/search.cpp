#include "imspelab/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "imspelab/parallel.hpp"
#include "imspelab/rng.hpp"

namespace imspelab {

namespace {

// One scalar of the descent cycle: a raw coordinate of a free point, or one
// component of the twin barycenter / offset.
struct Line {
    enum Kind { Raw, Bary, Delta } kind;
    int i; // point row (Raw only)
    int k; // dimension
};

std::vector<Line> make_cycle(const Design& d) {
    std::vector<Line> cy;
    const int free_rows = d.has_twin() ? d.n() - 2 : d.n();
    for (int i = 0; i < free_rows; ++i)
        for (int k = 0; k < d.dim(); ++k) cy.push_back({Line::Raw, i, k});
    if (d.has_twin()) {
        for (int k = 0; k < d.dim(); ++k) cy.push_back({Line::Bary, -1, k});
        for (int k = 0; k < d.dim(); ++k) cy.push_back({Line::Delta, -1, k});
    }
    return cy;
}

BigReal line_value(const Design& d, const Line& ln) {
    switch (ln.kind) {
        case Line::Raw: return d.at(ln.i, ln.k);
        case Line::Bary: return d.twin().barycenter[static_cast<size_t>(ln.k)];
        default: return d.twin().delta[static_cast<size_t>(ln.k)];
    }
}

void line_set(KernelCache& cache, const Line& ln, const BigReal& t) {
    switch (ln.kind) {
        case Line::Raw: cache.set_coord(ln.i, ln.k, t); break;
        case Line::Bary: cache.set_twin_barycenter(ln.k, t); break;
        default: cache.set_twin_delta(ln.k, t); break;
    }
}

// Feasible interval of the scalar, holding everything else fixed. Slight
// over-coverage is fine: infeasible candidates fail Design validation and
// are skipped.
std::pair<double, double> line_interval(const Design& d, const Line& ln) {
    if (ln.kind == Line::Raw) return {-1.0, 1.0};
    const double b = std::fabs(d.twin().barycenter[static_cast<size_t>(ln.k)].to_double());
    const double o = std::fabs(d.twin().delta[static_cast<size_t>(ln.k)].to_double());
    if (ln.kind == Line::Bary) return {-1.0 + o, 1.0 - o};
    return {-(1.0 - b), 1.0 - b};
}

// Candidate evaluation: move the cache to t and evaluate. Infeasible or
// uncertifiable candidates yield nullopt (the cache may then sit at the last
// successfully set position; callers always finish with a definitive set).
std::optional<BigReal> eval_candidate(KernelCache& cache, const Line& ln, double t,
                                      const PrecisionContext& ctx) {
    try {
        line_set(cache, ln, BigReal(t, ctx));
    } catch (const Error&) {
        return std::nullopt;
    }
    try {
        return imspe(cache).imspe;
    } catch (const Error&) {
        return std::nullopt;
    }
}

struct LineOutcome {
    bool moved = false;
    double distance = 0.0;
};

// Uniform-grid bracket (cfg.line_search_grid points plus the incumbent)
// followed by golden-section refinement; the best strictly-improving
// candidate wins. On exit the cache holds the accepted position (or the
// exact incumbent when no candidate improved).
LineOutcome line_search(KernelCache& cache, const Line& ln, BigReal& f_cur,
                        const SearchConfig& cfg, const PrecisionContext& ctx) {
    const BigReal x0 = line_value(cache.design(), ln);
    const double x0d = x0.to_double();
    const auto [lo, hi] = line_interval(cache.design(), ln);
    LineOutcome out;
    if (!(hi - lo > cfg.coord_tol)) return out;

    std::map<double, std::optional<BigReal>> memo;
    memo.emplace(x0d, f_cur); // incumbent seeds its own grid slot
    auto f = [&](double t) -> const std::optional<BigReal>& {
        auto it = memo.find(t);
        if (it == memo.end())
            it = memo.emplace(t, eval_candidate(cache, ln, t, ctx)).first;
        return it->second;
    };
    // Worse-than-anything ordering for failed candidates.
    auto less = [](const std::optional<BigReal>& a, const std::optional<BigReal>& b) {
        if (!a) return false;
        if (!b) return true;
        return *a < *b;
    };

    const int g = cfg.line_search_grid;
    std::vector<double> cand;
    cand.reserve(static_cast<size_t>(g) + 1);
    for (int j = 0; j < g; ++j)
        cand.push_back(lo + (hi - lo) * static_cast<double>(j) / (g - 1));
    cand.push_back(x0d);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    size_t best = 0;
    for (size_t j = 0; j < cand.size(); ++j) {
        const auto& fj = f(cand[j]);
        if (j == 0 || less(fj, memo.at(cand[best]))) best = j;
    }
    double a = cand[best > 0 ? best - 1 : best];
    double b = cand[best + 1 < cand.size() ? best + 1 : best];

    // Golden-section refinement on [a, b].
    if (b - a > cfg.coord_tol) {
        constexpr double invphi = 0.6180339887498948482;
        constexpr double invphi2 = 1.0 - invphi;
        double c = a + invphi2 * (b - a);
        double d = a + invphi * (b - a);
        std::optional<BigReal> fc = f(c);
        std::optional<BigReal> fd = f(d);
        while (b - a > cfg.coord_tol) {
            if (less(fc, fd)) {
                b = d;
                d = c;
                fd = fc;
                c = a + invphi2 * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + invphi * (b - a);
                fd = f(d);
            }
        }
    }

    // Global winner over everything evaluated (ascending key order, strict
    // improvement only, so ties resolve deterministically to the smaller t
    // and the incumbent is never "re-accepted").
    double tbest = x0d;
    const BigReal* fbest = &f_cur;
    bool improved = false;
    for (const auto& [t, v] : memo) {
        if (v && *v < *fbest) {
            tbest = t;
            fbest = &*v;
            improved = true;
        }
    }
    if (improved) {
        const BigReal fnew = *fbest; // copy before the map mutates
        line_set(cache, ln, BigReal(tbest, ctx));
        f_cur = fnew;
        out.moved = true;
        out.distance = std::fabs(tbest - x0d);
    } else {
        line_set(cache, ln, x0); // restore the exact incumbent
    }
    return out;
}

// Twin-pair formation/dissolution between sweeps. Returns true if the
// design's structure changed (which defers the convergence decision).
bool restructure(KernelCache& cache, BigReal& f_cur, const CovarianceParams& params,
                 const SearchConfig& cfg, const PrecisionContext& ctx) {
    const Design& d = cache.design();
    const int n = d.n();
    const int dim = d.dim();
    if (d.has_twin()) {
        double sep = 0.0;
        for (const BigReal& dk : d.twin().delta)
            sep = std::max(sep, std::fabs(dk.to_double()));
        if (sep <= cfg.twin_split_tol) return false;
        try {
            KernelCache nc(d.without_twin(), params, ctx);
            const BigReal fnew = imspe(nc).imspe;
            cache = std::move(nc);
            f_cur = fnew;
            return true;
        } catch (const Error&) {
            return false; // keep the twin parameterization
        }
    }
    if (n < 2) return false;
    int bi = -1, bj = -1;
    double bsep = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double sep = 0.0;
            for (int k = 0; k < dim; ++k)
                sep = std::max(sep, std::fabs(d.at(i, k).to_double() -
                                              d.at(j, k).to_double()));
            if (sep < bsep) {
                bsep = sep;
                bi = i;
                bj = j;
            }
        }
    }
    if (!(bsep < cfg.twin_merge_tol)) return false;
    const BigReal two(2, ctx);
    TwinSpec tw;
    tw.barycenter.reserve(static_cast<size_t>(dim));
    tw.delta.reserve(static_cast<size_t>(dim));
    for (int k = 0; k < dim; ++k) {
        tw.barycenter.push_back((d.at(bi, k) + d.at(bj, k)) / two);
        tw.delta.push_back((d.at(bi, k) - d.at(bj, k)) / two);
    }
    std::vector<BigReal> leading;
    leading.reserve(static_cast<size_t>(n - 2) * dim);
    for (int i = 0; i < n; ++i) {
        if (i == bi || i == bj) continue;
        for (int k = 0; k < dim; ++k) leading.push_back(d.at(i, k));
    }
    try {
        Design nd(n, dim, std::move(leading), std::move(tw));
        KernelCache nc(nd, params, ctx);
        const BigReal fnew = imspe(nc).imspe;
        cache = std::move(nc);
        f_cur = fnew;
        return true;
    } catch (const Error&) {
        return false; // cannot evaluate the merged form; stay raw
    }
}

} // namespace

SearchResult ccd_minimize(const Design& initial, const CovarianceParams& params,
                          const SearchConfig& cfg, const PrecisionContext& ctx) {
    if (cfg.coord_tol <= 0 || cfg.obj_tol <= 0)
        throw DomainError("ccd_minimize: tolerances must be positive");
    if (cfg.max_sweeps < 1) throw DomainError("ccd_minimize: max_sweeps must be >= 1");
    if (cfg.line_search_grid < 2)
        throw DomainError("ccd_minimize: line_search_grid must be >= 2");

    KernelCache cache(initial, params, ctx);
    BigReal f_cur = imspe(cache).imspe;
    const BigReal obj_tol(cfg.obj_tol, ctx);

    SearchResult res;
    BigReal best_seen = f_cur;
    res.trace.push_back({0, best_seen});

    for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
        const BigReal f_start = f_cur;
        double max_move = 0.0;
        for (const Line& ln : make_cycle(cache.design())) {
            const LineOutcome lo = line_search(cache, ln, f_cur, cfg, ctx);
            if (lo.moved) max_move = std::max(max_move, lo.distance);
        }
        const bool changed = restructure(cache, f_cur, params, cfg, ctx);
        if (f_cur < best_seen) best_seen = f_cur;
        res.trace.push_back({sweep, best_seen});
        res.sweeps = sweep;
        if (!changed && max_move < cfg.coord_tol && f_start - f_cur < obj_tol) {
            res.converged = true;
            break;
        }
    }
    res.design = canonicalize(cache.design(), params);
    res.imspe = f_cur;
    return res;
}

SearchResult multistart(int n_starts, int n, int d, const CovarianceParams& params,
                        const SearchConfig& cfg, const PrecisionContext& ctx,
                        int jobs) {
    if (n_starts < 1) throw DomainError("multistart: n_starts must be >= 1");
    std::vector<std::optional<SearchResult>> results(static_cast<size_t>(n_starts));
    std::vector<std::string> errors(static_cast<size_t>(n_starts));
    parallel_for(n_starts, jobs, [&](long s) {
        std::mt19937_64 g = substream(cfg.rng_seed, static_cast<std::uint64_t>(s));
        std::vector<BigReal> pts;
        pts.reserve(static_cast<size_t>(n) * d);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < d; ++k) pts.emplace_back(u11(g), ctx);
        try {
            Design init(n, d, std::move(pts));
            results[static_cast<size_t>(s)] = ccd_minimize(init, params, cfg, ctx);
        } catch (const Error& e) {
            errors[static_cast<size_t>(s)] = e.what();
        }
    });
    int best = -1;
    for (int s = 0; s < n_starts; ++s) {
        if (!results[static_cast<size_t>(s)]) continue;
        if (best < 0 || results[static_cast<size_t>(s)]->imspe <
                            results[static_cast<size_t>(best)]->imspe)
            best = s;
    }
    if (best < 0)
        throw Error("multistart: every start failed (first error: " + errors[0] + ")");
    return *results[static_cast<size_t>(best)];
}

BaselineReport random_baseline(long n_samples, int n, int d,
                               const CovarianceParams& params,
                               const BigReal& reference_imspe, std::uint64_t seed,
                               const PrecisionContext& ctx, int jobs) {
    if (n_samples < 1) throw DomainError("random_baseline: n_samples must be >= 1");
    BaselineReport rep;
    rep.n_samples = n_samples;
    rep.n = n;
    rep.dim = d;
    rep.reference_imspe = reference_imspe;
    rep.samples.resize(static_cast<size_t>(n_samples));
    parallel_for(n_samples, jobs, [&](long s) {
        BaselineSample& rec = rep.samples[static_cast<size_t>(s)];
        rec.index = s;
        std::mt19937_64 g = substream(seed, static_cast<std::uint64_t>(s));
        rec.coords.resize(static_cast<size_t>(n) * d);
        for (double& c : rec.coords) c = u11(g);
        try {
            std::vector<BigReal> pts;
            pts.reserve(rec.coords.size());
            for (double c : rec.coords) pts.emplace_back(c, ctx);
            Design des(n, d, std::move(pts));
            rec.imspe = imspe(des, params, ctx).imspe;
            rec.ok = true;
        } catch (const Error& e) {
            rec.error = e.what();
        }
    });
    rep.histogram.assign(kBaselineHistBins, 0);
    bool have_gap = false;
    for (const BaselineSample& rec : rep.samples) {
        if (!rec.ok) {
            ++rep.skipped;
            continue;
        }
        const BigReal gap = rec.imspe - reference_imspe;
        if (gap.sign() < 0) ++rep.count_below_reference;
        if (!have_gap || gap < rep.min_gap) {
            rep.min_gap = gap;
            have_gap = true;
        }
        const double shifted = gap.to_double() + 1e-16;
        int bin = 0;
        if (shifted > 0) {
            const double lg = std::log10(shifted);
            bin = static_cast<int>(std::floor((lg + 16.0) / 0.5));
            bin = std::clamp(bin, 0, kBaselineHistBins - 1);
        }
        ++rep.histogram[static_cast<size_t>(bin)];
    }
    return rep;
}

namespace {

// Lexicographic exact comparison of flattened coordinate blocks.
bool rows_less(const std::vector<BigReal>& a, const std::vector<BigReal>& b) {
    const size_t m = std::min(a.size(), b.size());
    for (size_t t = 0; t < m; ++t) {
        if (a[t] < b[t]) return true;
        if (b[t] < a[t]) return false;
    }
    return a.size() < b.size();
}

// Applies one symmetry-group element and renders the result in sorted form.
Design transformed(const Design& d, unsigned signs, bool swap) {
    const int n = d.n();
    const int dim = d.dim();
    auto src = [&](int k) { return swap ? 1 - k : k; };
    auto flip = [&](const BigReal& v, int k) {
        return (signs >> k) & 1u ? -v : v;
    };
    const int lead = d.has_twin() ? n - 2 : n;
    std::vector<std::vector<BigReal>> rows;
    rows.reserve(static_cast<size_t>(lead));
    for (int i = 0; i < lead; ++i) {
        std::vector<BigReal> r;
        r.reserve(static_cast<size_t>(dim));
        for (int k = 0; k < dim; ++k) r.push_back(flip(d.at(i, src(k)), k));
        rows.push_back(std::move(r));
    }
    std::sort(rows.begin(), rows.end(), rows_less);
    std::vector<BigReal> pts;
    pts.reserve(static_cast<size_t>(lead) * dim);
    for (auto& r : rows)
        for (auto& v : r) pts.push_back(std::move(v));
    if (!d.has_twin()) return Design(n, dim, std::move(pts));

    TwinSpec tw;
    tw.barycenter.reserve(static_cast<size_t>(dim));
    tw.delta.reserve(static_cast<size_t>(dim));
    for (int k = 0; k < dim; ++k) {
        tw.barycenter.push_back(flip(d.twin().barycenter[static_cast<size_t>(src(k))], k));
        tw.delta.push_back(flip(d.twin().delta[static_cast<size_t>(src(k))], k));
    }
    // Twin order is itself a symmetry: fix it by making the offset's first
    // nonzero component positive.
    for (int k = 0; k < dim; ++k) {
        const int s = tw.delta[static_cast<size_t>(k)].sign();
        if (s == 0) continue;
        if (s < 0)
            for (BigReal& v : tw.delta) v = -v;
        break;
    }
    return Design(n, dim, std::move(pts), std::move(tw));
}

std::vector<BigReal> flattened(const Design& d) {
    std::vector<BigReal> f;
    f.reserve(static_cast<size_t>(d.n()) * d.dim());
    for (int i = 0; i < d.n(); ++i)
        for (int k = 0; k < d.dim(); ++k) f.push_back(d.at(i, k));
    return f;
}

} // namespace

Design canonicalize(const Design& design, const CovarianceParams& params) {
    const int dim = design.dim();
    if (dim != params.dim())
        throw DomainError("canonicalize: design dimension does not match theta dimension");
    if (dim > 16)
        throw UnsupportedError("canonicalize: D > 16 sign enumeration not supported");
    const bool allow_swap = dim == 2 && params.theta(0) == params.theta(1);
    std::optional<Design> best;
    std::vector<BigReal> best_key;
    for (int sw = 0; sw <= (allow_swap ? 1 : 0); ++sw) {
        for (unsigned signs = 0; signs < (1u << dim); ++signs) {
            Design cand = transformed(design, signs, sw == 1);
            std::vector<BigReal> key = flattened(cand);
            if (!best || rows_less(key, best_key)) {
                best = std::move(cand);
                best_key = std::move(key);
            }
        }
    }
    return *best;
}

} // namespace imspelab
