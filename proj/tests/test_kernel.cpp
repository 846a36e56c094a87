#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "imspelab/kernel.hpp"
#include "imspelab/rng.hpp"
#include "oracle_quadrature.hpp"

using namespace imspelab;

namespace {

double rel_diff(const BigReal& a, const BigReal& b) {
    BigReal d = abs(a - b);
    BigReal m = abs(a);
    if (m.is_zero()) return d.to_double();
    return (d / m).to_double();
}

bool big_eq(const BigReal& a, const BigReal& b) {
    return !(a < b) && !(b < a);
}

Design random_design(int n, int d, std::mt19937_64& g, const PrecisionContext& ctx) {
    std::vector<BigReal> pts;
    pts.reserve(static_cast<size_t>(n) * d);
    for (int i = 0; i < n * d; ++i) pts.emplace_back(u11(g), ctx);
    return Design(n, d, std::move(pts));
}

CovarianceParams unit_params(int d, const PrecisionContext& ctx) {
    return CovarianceParams(std::vector<BigReal>(static_cast<size_t>(d),
                                                 BigReal(1, ctx)),
                            BigReal(1, ctx));
}

} // namespace

TEST_CASE("I1 at the origin matches the classic erf integral") {
    PrecisionContext ctx(60);
    // I1(1, 0) = integral_0^1 exp(-x^2) dx = 0.74682413281242702540 (20 digits)
    BigReal v = I1(BigReal(1, ctx), BigReal(0, ctx), ctx);
    CHECK(rel_diff(v, from_string("7.4682413281242702539946743613185e-1", ctx)) <
          1e-28);
}

TEST_CASE("I1 and I2 match the quadrature oracle on random inputs") {
    PrecisionContext ctx(60);
    std::mt19937_64 g = substream(101, 0);
    for (int i = 0; i < 100; ++i) {
        double th = 0.01 + 3.99 * u01(g);
        double a = u11(g), b = u11(g);
        BigReal thb(th, ctx), ab(a, ctx), bb(b, ctx);
        double v1 = I1(thb, ab, ctx).to_double();
        double v2 = I2(thb, ab, bb, ctx).to_double();
        CHECK(std::fabs(v1 - static_cast<double>(oracle::i1(th, a))) < 1e-13);
        CHECK(std::fabs(v2 - static_cast<double>(oracle::i2(th, a, b))) < 1e-13);
    }
}

TEST_CASE("I2 is symmetric in its two points") {
    PrecisionContext ctx(60);
    std::mt19937_64 g = substream(102, 0);
    for (int i = 0; i < 100; ++i) {
        BigReal th(0.01 + 3.99 * u01(g), ctx), a(u11(g), ctx), b(u11(g), ctx);
        CHECK(big_eq(I2(th, a, b, ctx), I2(th, b, a, ctx)));
    }
}

TEST_CASE("S_1 factors across dimensions") {
    PrecisionContext ctx(60);
    std::mt19937_64 g = substream(103, 0);
    std::vector<BigReal> theta{BigReal(0.7, ctx), BigReal(1.9, ctx)};
    CovarianceParams params(theta, BigReal(2.5, ctx));
    for (int i = 0; i < 20; ++i) {
        std::vector<BigReal> x{BigReal(u11(g), ctx), BigReal(u11(g), ctx)};
        BigReal s1 = S_l(x, params, 1, ctx);
        BigReal prod = BigReal(2.5, ctx) * I1(theta[0], x[0], ctx) *
                       I1(theta[1], x[1], ctx);
        CHECK(rel_diff(s1, prod) < 1e-55);
    }
}

TEST_CASE("R entries match dimensionwise quadrature") {
    PrecisionContext ctx(60);
    std::mt19937_64 g = substream(104, 0);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 1 + static_cast<int>(u01(g) * 3.999);
        int d = 1 + static_cast<int>(u01(g) * 1.999);
        std::vector<double> th(static_cast<size_t>(d));
        std::vector<BigReal> thb;
        for (double& t : th) {
            t = 0.05 + 2.0 * u01(g);
            thb.emplace_back(t, ctx);
        }
        Design design = random_design(n, d, g, ctx);
        CovarianceParams params(thb, BigReal(1, ctx));
        Mat r = build_R(design, params, ctx);

        REQUIRE(r.rows() == n + 1);
        CHECK(abs(r.at(0, 0) - BigReal(1, ctx)).to_double() < 1e-55);
        for (int i = 0; i < n; ++i) {
            long double border = 1.0L;
            for (int k = 0; k < d; ++k)
                border *= oracle::i1(th[static_cast<size_t>(k)],
                                     design.at(i, k).to_double());
            CHECK(std::fabs(r.at(0, i + 1).to_double() -
                            static_cast<double>(border)) < 1e-12);
            for (int j = i; j < n; ++j) {
                long double inner = 1.0L;
                for (int k = 0; k < d; ++k)
                    inner *= oracle::i2(th[static_cast<size_t>(k)],
                                        design.at(i, k).to_double(),
                                        design.at(j, k).to_double());
                CHECK(std::fabs(r.at(i + 1, j + 1).to_double() -
                                static_cast<double>(inner)) < 1e-12);
            }
        }
    }
}

TEST_CASE("L holds the bordered covariance matrix") {
    PrecisionContext ctx(60);
    std::mt19937_64 g = substream(105, 0);
    Design design = random_design(3, 2, g, ctx);
    std::vector<BigReal> theta{BigReal(0.4, ctx), BigReal(1.2, ctx)};
    CovarianceParams params(theta, BigReal(3, ctx));
    Mat l = build_L(design, params, ctx);

    CHECK(l.at(0, 0).is_zero());
    for (int i = 0; i < 3; ++i) {
        CHECK(rel_diff(l.at(0, i + 1), BigReal(3, ctx)) < 1e-55);
        CHECK(big_eq(l.at(0, i + 1), l.at(i + 1, 0)));
        CHECK(rel_diff(l.at(i + 1, i + 1), BigReal(3, ctx)) < 1e-55);
        for (int j = 0; j < 3; ++j) {
            double e = 0.0;
            for (int k = 0; k < 2; ++k) {
                double dx = design.at(i, k).to_double() - design.at(j, k).to_double();
                e += theta[static_cast<size_t>(k)].to_double() * dx * dx;
            }
            CHECK(std::fabs(l.at(i + 1, j + 1).to_double() - 3.0 * std::exp(-e)) <
                  1e-13);
            CHECK(big_eq(l.at(i + 1, j + 1), l.at(j + 1, i + 1)));
        }
    }
}

TEST_CASE("N = 1 matrices take their closed one-point form") {
    PrecisionContext ctx(60);
    std::vector<BigReal> pt{BigReal(0.3, ctx), BigReal(-0.2, ctx)};
    Design design(1, 2, pt);
    std::vector<BigReal> theta{BigReal(1, ctx), BigReal(2, ctx)};
    CovarianceParams params(theta, BigReal(1.5, ctx));
    Mat l = build_L(design, params, ctx);
    Mat r = build_R(design, params, ctx);
    CHECK(l.at(0, 0).is_zero());
    CHECK(rel_diff(l.at(1, 1), BigReal(1.5, ctx)) < 1e-55);
    CHECK(rel_diff(r.at(0, 1), S_l(pt, params, 1, ctx)) < 1e-55);
    CHECK(rel_diff(r.at(1, 1), S_l(pt, params, 2, ctx)) < 1e-55);
}

TEST_CASE("reflection and factor-swap leave matrices entrywise identical") {
    PrecisionContext ctx(60);
    std::mt19937_64 g = substream(106, 0);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + static_cast<int>(u01(g) * 2.999);
        Design design = random_design(n, 2, g, ctx);
        CovarianceParams params = unit_params(2, ctx);

        // Reflect coordinate 0 of every point.
        std::vector<BigReal> refl;
        for (int i = 0; i < n; ++i) {
            refl.push_back(-design.at(i, 0));
            refl.push_back(design.at(i, 1));
        }
        Design reflected(n, 2, std::move(refl));

        // Swap the two coordinates of every point (theta is equal across
        // dimensions, so the kernel cannot tell).
        std::vector<BigReal> swapped;
        for (int i = 0; i < n; ++i) {
            swapped.push_back(design.at(i, 1));
            swapped.push_back(design.at(i, 0));
        }
        Design swapped_design(n, 2, std::move(swapped));

        Mat r0 = build_R(design, params, ctx), l0 = build_L(design, params, ctx);
        for (const Design* variant : {&reflected, &swapped_design}) {
            Mat r1 = build_R(*variant, params, ctx);
            Mat l1 = build_L(*variant, params, ctx);
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= n; ++j) {
                    CHECK(big_eq(r0.at(i, j), r1.at(i, j)));
                    CHECK(big_eq(l0.at(i, j), l1.at(i, j)));
                }
        }
    }
}

TEST_CASE("twin parameterization agrees with materialized coordinates") {
    PrecisionContext ctx(60);
    std::vector<BigReal> theta{BigReal(0.128, ctx), BigReal(0.00016, ctx)};
    CovarianceParams params(theta, BigReal(1, ctx));
    for (double delta : {1e-3, 1e-6, 1e-10}) {
        // Twin form: two outer points plus a twin pair at the origin offset
        // along x2 by +-delta.
        std::vector<BigReal> outer{BigReal(0.767117, ctx), BigReal(0, ctx),
                                   BigReal(-0.767117, ctx), BigReal(0, ctx)};
        TwinSpec tw;
        tw.barycenter = {BigReal(0, ctx), BigReal(0, ctx)};
        tw.delta = {BigReal(0, ctx), BigReal(delta, ctx)};
        Design twin_design(4, 2, outer, tw);

        // Raw form: the same four points materialized.
        std::vector<BigReal> raw{BigReal(0.767117, ctx), BigReal(0, ctx),
                                 BigReal(-0.767117, ctx), BigReal(0, ctx),
                                 BigReal(0, ctx),         BigReal(delta, ctx),
                                 BigReal(0, ctx),         BigReal(-delta, ctx)};
        Design raw_design(4, 2, std::move(raw));

        Mat rt = build_R(twin_design, params, ctx);
        Mat rr = build_R(raw_design, params, ctx);
        Mat lt = build_L(twin_design, params, ctx);
        Mat lr = build_L(raw_design, params, ctx);
        for (int i = 0; i <= 4; ++i)
            for (int j = 0; j <= 4; ++j) {
                CHECK(rel_diff(rt.at(i, j), rr.at(i, j)) < 1e-50);
                CHECK(rel_diff(lt.at(i, j), lr.at(i, j)) < 1e-50);
            }
    }
}

TEST_CASE("incremental cache updates match a fresh build bit for bit") {
    PrecisionContext ctx(60);
    std::mt19937_64 g = substream(107, 0);
    CovarianceParams params(
        {BigReal(0.6, ctx), BigReal(1.4, ctx)}, BigReal(1, ctx));

    SUBCASE("raw coordinate moves") {
        Design design = random_design(4, 2, g, ctx);
        KernelCache cache(design, params, ctx);
        Design current = design;
        for (int step = 0; step < 25; ++step) {
            int i = static_cast<int>(u01(g) * 3.999);
            int k = static_cast<int>(u01(g) * 1.999);
            BigReal v(u11(g), ctx);
            cache.set_coord(i, k, v);
            current = current.with_coord(i, k, v);
            Mat li(5, 5, ctx), ri(5, 5, ctx);
            cache.assemble_L(li);
            cache.assemble_R(ri);
            Mat lf = build_L(current, params, ctx);
            Mat rf = build_R(current, params, ctx);
            for (int a = 0; a < 5; ++a)
                for (int b = 0; b < 5; ++b) {
                    CHECK(big_eq(li.at(a, b), lf.at(a, b)));
                    CHECK(big_eq(ri.at(a, b), rf.at(a, b)));
                }
        }
    }

    SUBCASE("twin component moves") {
        std::vector<BigReal> outer{BigReal(0.7, ctx), BigReal(0.1, ctx),
                                   BigReal(-0.6, ctx), BigReal(-0.2, ctx)};
        TwinSpec tw;
        tw.barycenter = {BigReal(0.05, ctx), BigReal(-0.1, ctx)};
        tw.delta = {BigReal(1e-3, ctx), BigReal(2e-3, ctx)};
        Design design(4, 2, outer, tw);
        KernelCache cache(design, params, ctx);
        Design current = design;
        for (int step = 0; step < 25; ++step) {
            int k = static_cast<int>(u01(g) * 1.999);
            BigReal v(0.3 * u11(g), ctx);
            TwinSpec next = current.twin();
            if (step % 2 == 0) {
                cache.set_twin_barycenter(k, v);
                next.barycenter[static_cast<size_t>(k)] = v;
            } else {
                BigReal dv(1e-3 * (1.0 + u01(g)), ctx);
                cache.set_twin_delta(k, dv);
                next.delta[static_cast<size_t>(k)] = dv;
            }
            current = current.with_twin(next);
            Mat li(5, 5, ctx), ri(5, 5, ctx);
            cache.assemble_L(li);
            cache.assemble_R(ri);
            Mat lf = build_L(current, params, ctx);
            Mat rf = build_R(current, params, ctx);
            for (int a = 0; a < 5; ++a)
                for (int b = 0; b < 5; ++b) {
                    CHECK(big_eq(li.at(a, b), lf.at(a, b)));
                    CHECK(big_eq(ri.at(a, b), rf.at(a, b)));
                }
        }
    }
}
