#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "kinetic_barrier/fixtures.hpp"
#include "kinetic_barrier/kernel.hpp"

using namespace kb;

namespace {
KernelParams params(int d, double gamma, double s) {
    KernelParams p;
    p.d = d;
    p.gamma = gamma;
    p.s = s;
    return p;
}
}  // namespace

TEST_CASE("kernel vanishes for f = 0 and rejects degenerate pairs") {
    VelocityGrid<2> g(2.0, 16);
    auto f = make_vacuum_like<2>(g);
    const auto p = params(2, 0.5, 0.3);
    const Vec<2> v{{0.3, 0.1}}, vp{{1.0, -0.4}};
    CHECK(kernel_kf(f, v, vp, p).value == 0.0);
    CHECK_THROWS_AS(kernel_kf(f, v, v, p), DegeneratePair);
}

TEST_CASE("kernel positivity and linearity in f") {
    VelocityGrid<2> g(3.0, 24);
    const auto p = params(2, 0.5, 0.3);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    auto f1 = make_maxwellian<2>(g, 1.0, 0.7);
    auto f2 = make_two_bump<2>(g, 1.0, 0.3, 1.2);
    const Vec<2> v{{0.9, -0.2}}, vp{{-0.5, 0.8}};

    for (int k = 0; k < 10; ++k) {
        const double a = 2.0 * u01(rng), b = 2.0 * u01(rng);
        std::vector<double> mix(g.size());
        for (std::size_t i = 0; i < mix.size(); ++i)
            mix[i] = a * f1.values[i] + b * f2.values[i];
        GridDistribution<2> fm(g, std::move(mix), f1.interp);

        const double k1 = kernel_kf(f1, v, vp, p).value;
        const double k2 = kernel_kf(f2, v, vp, p).value;
        const double km = kernel_kf(fm, v, vp, p).value;
        CHECK(k1 >= 0.0);
        CHECK(k2 >= 0.0);
        CHECK(km == Catch::Approx(a * k1 + b * k2).epsilon(1e-10));
    }
}

TEST_CASE("cone-of-nondegeneracy scaling of the kernel on a central bump") {
    // f concentrated at the origin; for v' - v orthogonal to v the hyperplane
    // through v passes through the bump and K ~ |v'-v|^{-d-2s} |v|^{gamma+2s+1}.
    VelocityGrid<2> g(2.0, 32);
    auto f = make_maxwellian<2>(g, 1.0, 0.09);
    const auto p = params(2, 0.5, 0.3);

    auto scaled = [&](double V, double r) {
        const Vec<2> v{{V, 0.0}};
        const Vec<2> vp{{V, r}};  // v'-v orthogonal to v
        KernelOpts opts;
        opts.r_plane = 2.0 * V + 8.0;
        const double K = kernel_kf(f, v, vp, p, opts).value;
        return K * std::pow(r, p.d + 2.0 * p.s) / std::pow(V, p.gamma + 2.0 * p.s + 1.0);
    };

    const double base = scaled(8.0, 0.5);
    CHECK(base > 0.0);
    for (double V : {8.0, 16.0, 32.0}) {
        for (double r : {0.5, 1.0}) {
            const double ratio = scaled(V, r) / base;
            CHECK(ratio > 0.4);
            CHECK(ratio < 2.5);
        }
    }
}

TEST_CASE("kernel against a brute-force fine hyperplane quadrature") {
    VelocityGrid<2> g(3.0, 32);
    auto f = make_maxwellian<2>(g, 1.0, 0.8);
    const auto p = params(2, 0.5, 0.3);
    const Vec<2> v{{0.6, -0.3}};
    const Vec<2> vp{{1.4, 0.5}};

    const Estimate K = kernel_kf(f, v, vp, p);

    // Oracle: uniform midpoint quadrature at 4x the grid resolution over the
    // same annulus of the hyperplane, with the same angular-support cut and
    // the 2^{d-1} collision-geometry factor.
    const Vec<2> w = vp - v;
    const double w_abs = norm(w);
    const Vec<2> e = rot90((1.0 / w_abs) * w);
    const double R = 4.0 * g.r_max;
    const double step = g.h() / 4.0;
    double acc = 0.0;
    for (int side = -1; side <= 1; side += 2) {
        for (double t = w_abs + 0.5 * step; t < R; t += step) {
            const Vec<2> x = v + (side * t) * e;
            const double ct = (t * t - w_abs * w_abs) / (t * t + w_abs * w_abs);
            acc += f.eval(x) * std::pow(t, p.gamma + 2.0 * p.s + 1.0) * p.btilde_at(ct) *
                   step;
        }
    }
    const double oracle = 2.0 * acc * std::pow(w_abs, -(p.d + 2.0 * p.s));
    CHECK(K.value == Catch::Approx(oracle).epsilon(0.01));
}

TEST_CASE("kernel in three dimensions is finite and positive") {
    VelocityGrid<3> g(2.0, 16);
    auto f = make_maxwellian<3>(g, 1.0, 0.5);
    const auto p = params(3, 0.5, 0.3);
    const Vec<3> v{{0.4, 0.2, -0.1}}, vp{{-0.3, 0.7, 0.5}};
    const Estimate K = kernel_kf(f, v, vp, p);
    CHECK(K.value > 0.0);
    CHECK(std::isfinite(K.value));
}
