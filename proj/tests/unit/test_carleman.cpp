#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "kinetic_barrier/barrier.hpp"
#include "kinetic_barrier/carleman.hpp"
#include "kinetic_barrier/fixtures.hpp"

using namespace kb;

namespace {

KernelParams params(int d, double gamma, double s) {
    KernelParams p;
    p.d = d;
    p.gamma = gamma;
    p.s = s;
    return p;
}

// random mixture of two or three Gaussian bumps, strictly positive core
GridDistribution<2> random_smooth(std::mt19937_64& rng, const VelocityGrid<2>& g) {
    std::uniform_real_distribution<double> amp(0.3, 1.0), off(-1.5, 1.5), wid(0.5, 1.2);
    const int nb = 2 + static_cast<int>(rng() % 2);
    std::vector<Vec<2>> centers;
    std::vector<double> amps, sig;
    for (int b = 0; b < nb; ++b) {
        centers.push_back(Vec<2>{{off(rng), off(rng)}});
        amps.push_back(amp(rng));
        sig.push_back(wid(rng));
    }
    return GridDistribution<2>::sample(
        g,
        [&](const Vec<2>& v) {
            double s = 0.0;
            for (int b = 0; b < nb; ++b)
                s += amps[static_cast<std::size_t>(b)] *
                     std::exp(-norm2(v - centers[static_cast<std::size_t>(b)]) /
                              (2.0 * sig[static_cast<std::size_t>(b)] *
                               sig[static_cast<std::size_t>(b)]));
            return s;
        },
        Interp::tricubic);
}

}  // namespace

TEST_CASE("q_ns basics") {
    VelocityGrid<2> g(6.0, 48);
    const auto p0 = params(2, 0.0, 0.3);
    const auto cs0 = cancellation_constant(p0);

    auto zero = make_vacuum_like<2>(g);
    CHECK(q_ns(zero, Vec<2>{{0.5, 0.0}}, p0, cs0).value == 0.0);

    // gamma = 0: the convolution equals the grid mass exactly
    auto max = make_maxwellian<2>(g, 1.0, 1.0);
    double grid_mass = 0.0;
    for (double x : max.values) grid_mass += x;
    grid_mass *= g.h() * g.h();
    const Vec<2> v{{0.7, -0.3}};
    const auto qv = q_ns(max, v, p0, cs0);
    CHECK(qv.value ==
          Catch::Approx(cs0.value * max.eval(v) * grid_mass).epsilon(1e-10));
}

TEST_CASE("q_ns with gamma = 0.5 against a 4x-resolution direct convolution") {
    VelocityGrid<2> g(6.0, 32);
    const auto p = params(2, 0.5, 0.3);
    const auto cs = cancellation_constant(p);
    auto f = make_maxwellian<2>(g, 1.0, 1.0);
    const Vec<2> v{{0.0, 0.0}};
    const auto qv = q_ns(f, v, p, cs);

    // oracle: midpoint sum over a 4x finer lattice of f(v-u) |u|^gamma
    const double hf = g.h() / 4.0;
    double conv = 0.0;
    for (double ux = -6.0 + 0.5 * hf; ux < 6.0; ux += hf)
        for (double uy = -6.0 + 0.5 * hf; uy < 6.0; uy += hf) {
            const double r = std::hypot(ux, uy);
            if (r < 1e-12) continue;
            conv += f.eval(Vec<2>{{v[0] - ux, v[1] - uy}}) * std::pow(r, p.gamma) *
                    hf * hf;
        }
    CHECK(qv.value == Catch::Approx(cs.value * f.eval(v) * conv).epsilon(6e-3));
}

TEST_CASE("q_ns handles the singular convolution kernel for gamma < 0") {
    VelocityGrid<2> g(6.0, 32);
    const auto p = params(2, -0.5, 0.8);
    const auto cs = cancellation_constant(p);
    auto f = make_maxwellian<2>(g, 1.0, 1.0);
    const Vec<2> v{{0.1, 0.2}};
    const auto qv = q_ns(f, v, p, cs);
    CHECK(qv.value > 0.0);
    // radial Bessel-integral reference for the unit Maxwellian at |v| known:
    // int f(v-u) |u|^{-1/2} du evaluated independently to 12 digits
    const double conv_exact = 1.024058211084;
    CHECK(convolve_power(f, v, p).value == Catch::Approx(conv_exact).epsilon(5e-3));
    CHECK(qv.value ==
          Catch::Approx(cs.value * f.eval(v) * conv_exact).epsilon(5e-3));
}

TEST_CASE("q_s vanishes on constant second argument") {
    VelocityGrid<2> g(4.0, 32);
    const auto p = params(2, 0.5, 0.3);
    auto f = make_maxwellian<2>(g, 1.0, 0.8);
    auto konst = [](const Vec<2>&) { return 0.7; };
    const Vec<2> v{{0.4, -0.6}};
    const auto a = q_s_carleman(f, konst, v, p);
    const auto b = q_s_reverse(f, konst, v, p);
    CHECK(std::fabs(a.value) < 1e-12);
    CHECK(std::fabs(b.value) < 1e-12);

    auto zero = make_vacuum_like<2>(g);
    auto radial = [](const Vec<2>& x) { return std::exp(-norm2(x)); };
    CHECK(q_s_reverse(zero, radial, v, p).value == 0.0);
}

TEST_CASE("good-term sign: bump at origin, decreasing g, large |v|") {
    VelocityGrid<2> g(2.0, 24);
    const auto p = params(2, 0.5, 0.3);
    auto f = make_maxwellian<2>(g, 1.0, 0.25);
    Barrier bar = Barrier::plain(1.0, 5.0);
    auto gb = [&](const Vec<2>& x) { return bar.value(1.0, norm(x)); };
    const Vec<2> v{{6.0, 0.0}};
    const auto qs = q_s_carleman(f, gb, v, p);
    CHECK(qs.value < 0.0);
}

TEST_CASE("forward and reverse representations agree on random smooth cases") {
    VelocityGrid<2> g(4.0, 48);
    const auto p = params(2, 0.5, 0.3);
    std::mt19937_64 rng(0);
    std::uniform_real_distribution<double> uv(-2.0, 2.0);

    CarlemanOpts opts;
    opts.n_dirs = 64;
    opts.shell_per_decade = 7;
    opts.per_decade = 7;
    opts.g_support_radius = 4.0;
    opts.g_fine_width = 0.3;

    int checked = 0;
    for (int k = 0; k < 20; ++k) {
        auto f1 = random_smooth(rng, g);
        auto f2 = random_smooth(rng, g);
        const Vec<2> v{{uv(rng), uv(rng)}};
        auto g2 = [&](const Vec<2>& x) { return f2.eval(x); };
        const auto fwd = q_s_carleman(f1, g2, v, p, {}, opts);
        const auto rev = q_s_reverse(f1, g2, v, p, {}, opts);
        const double scale = std::max(std::fabs(fwd.value), std::fabs(rev.value));
        if (scale < 1e-3) continue;  // too close to zero for a relative check
        CHECK(std::fabs(fwd.value - rev.value) <= 0.01 * scale);
        ++checked;
    }
    CHECK(checked >= 12);
}

TEST_CASE("split recombination stays within the summed error estimates") {
    VelocityGrid<2> g(4.0, 48);
    const auto p = params(2, 0.5, 0.3);
    const auto cs = cancellation_constant(p);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> uv(-1.0, 1.0);

    auto f = make_maxwellian_bump<2>(g, 1.0, 0.6, 0.15, 0.8, 1.0);
    Barrier bar = Barrier::plain(0.5, 5.0);
    auto gb = [&](const Vec<2>& x) { return bar.value(1.0, norm(x)); };

    for (int k = 0; k < 10; ++k) {
        Vec<2> v{{uv(rng), uv(rng)}};
        v[0] += (v[0] >= 0 ? 2.0 : -2.0);  // keep |v| away from 0
        const auto split = split_operator(f, gb, v, 5.0, p, cs);
        const double defect = split.recombination_defect();
        CHECK(std::fabs(defect) <= split.combined_error());
    }
}

TEST_CASE("chi domains partition the ball |v'| < |v| exactly") {
    // chi1 covers |v'| > |v|/2, chi2 the ball below c3|v|, chi3 the annulus
    // between; away from the measure-zero boundary each node is covered once.
    VelocityGrid<2> g(8.0, 64);
    const double q = 5.0, vabs = 4.0;
    const double c3 = splitting_c3(q);
    std::size_t boundary_hits = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = norm(g.node(i));
        const int chi1 = r > 0.5 * vabs ? 1 : 0;
        const int chi2 = r < c3 * vabs ? 1 : 0;
        const int chi3 = (r >= c3 * vabs && r < 0.5 * vabs) ? 1 : 0;
        if (r == 0.5 * vabs) {
            ++boundary_hits;
            continue;
        }
        CHECK(chi1 + chi2 + chi3 == 1);
    }
    CHECK(boundary_hits <= 4);
}

TEST_CASE("good term is negative for a hydro-normalized f at |v| = 8") {
    VelocityGrid<2> g(4.0, 48);
    const auto p = params(2, 0.5, 0.3);
    const auto cs = cancellation_constant(p);
    auto f = make_maxwellian<2>(g, 1.0, 0.5);
    Barrier bar = Barrier::plain(1.0, 8.0);
    auto gb = [&](const Vec<2>& x) { return bar.value(1.0, norm(x)); };
    const Vec<2> v{{8.0, 0.0}};
    const auto split = split_operator(f, gb, v, 8.0, p, cs);
    CHECK(split.good.value < 0.0);
}

TEST_CASE("monotone contact inequality") {
    // f <= g with equality at v: Q_s(f,f)(v) <= Q_s(f,g)(v) and the same for
    // the good term.
    VelocityGrid<2> g(4.0, 48);
    const auto p = params(2, 0.5, 0.3);
    const auto cs = cancellation_constant(p);

    auto f_raw = make_heavy_tail<2>(g, 1.0, 0.5, 0.2, 5.0);
    Barrier bar = Barrier::plain(1.0, 5.0);
    double ratio_max = 0.0;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double r = f_raw.values[i] / bar.value(1.0, norm(g.node(i)));
        if (r > ratio_max) {
            ratio_max = r;
            arg = i;
        }
    }
    bar.N = NSchedule::constant(ratio_max);
    const Vec<2> v = g.node(arg);
    auto gb = [&](const Vec<2>& x) { return bar.value(1.0, norm(x)); };

    CarlemanOpts opts;
    opts.g_support_radius = g.support_radius();

    const auto qs_ff = q_s_reverse(f_raw, f_raw, v, p, {}, opts);
    const auto qs_fg = q_s_reverse(f_raw, gb, v, p, {}, opts);
    CHECK(qs_ff.value <= qs_fg.value + qs_ff.error + qs_fg.error);

    const auto split_ff = split_operator(f_raw, f_raw, v, 5.0, p, cs, {}, opts);
    const auto split_fg = split_operator(f_raw, gb, v, 5.0, p, cs, {}, opts);
    CHECK(split_ff.good.value <=
          split_fg.good.value + split_ff.good.error + split_fg.good.error);
}

TEST_CASE("PV stability under halving of the inner cut") {
    VelocityGrid<2> g(4.0, 48);
    const auto p = params(2, 0.5, 0.8);  // s >= 1/2: pairing mandatory
    auto f = make_maxwellian<2>(g, 1.0, 0.8);
    auto f2 = make_maxwellian_bump<2>(g, 1.0, 0.8, 0.2, 0.9, 1.2);
    auto gfun = [&](const Vec<2>& x) { return f2.eval(x); };
    const Vec<2> v{{0.8, 0.4}};

    CarlemanOpts opts;
    opts.g_support_radius = g.support_radius();
    const auto a = q_s_carleman(f, gfun, v, p, {}, opts);
    opts.pv_rmin_factor = 0.125;
    const auto b = q_s_carleman(f, gfun, v, p, {}, opts);
    CHECK(std::fabs(a.value - b.value) <= a.error + b.error);

    PVPolicy excl;
    excl.mode = PVPolicy::Mode::radius_exclusion;
    excl.r_pv = 0.05;
    CHECK_THROWS_AS(q_s_carleman(f, gfun, v, p, excl, opts), PreconditionViolated);
}

TEST_CASE("radius exclusion is admissible below s = 1/2") {
    VelocityGrid<2> g(4.0, 32);
    const auto p = params(2, 0.5, 0.3);
    auto f = make_maxwellian<2>(g, 1.0, 0.8);
    Barrier bar = Barrier::plain(1.0, 4.0);
    auto gb = [&](const Vec<2>& x) { return bar.value(1.0, norm(x)); };
    const Vec<2> v{{1.5, 0.0}};

    PVPolicy excl;
    excl.mode = PVPolicy::Mode::radius_exclusion;
    excl.r_pv = 0.02;
    const auto qe = q_s_carleman(f, gb, v, p, excl);
    const auto qp = q_s_carleman(f, gb, v, p);
    CHECK(std::fabs(qe.value - qp.value) <=
          2.0 * (qe.error + qp.error) + 0.05 * std::fabs(qp.value));
}
