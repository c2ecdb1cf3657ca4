#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "kinetic_barrier/fixtures.hpp"
#include "kinetic_barrier/hydro.hpp"
#include "kinetic_barrier/solver.hpp"

using namespace kb;

namespace {
SolverConfig<2> small_config() {
    SolverConfig<2> cfg;
    cfg.params.d = 2;
    cfg.params.gamma = 0.5;
    cfg.params.s = 0.3;
    cfg.grid = VelocityGrid<2>(4.0, 32);
    cfg.sigma.theta_min = 0.3;
    cfg.sigma.theta_per_decade = 4;
    cfg.sigma.coarse_theta = true;
    cfg.sigma.with_error = false;
    return cfg;
}
}  // namespace

TEST_CASE("zero distribution is a fixed point") {
    auto cfg = small_config();
    auto zero = make_vacuum_like<2>(cfg.grid);
    const auto next = step(zero, cfg, 1e-3);
    for (double x : next.values) CHECK(x == 0.0);
}

TEST_CASE("Maxwellian is a quadrature-level fixed point") {
    auto cfg = small_config();
    auto m = make_maxwellian<2>(cfg.grid, 1.0, 0.6, Interp::multilinear);
    const double dt = 0.5 * dt_stability(m, cfg);
    const auto next = step(m, cfg, dt);
    double dmax = 0.0;
    for (std::size_t i = 0; i < m.values.size(); ++i)
        dmax = std::max(dmax, std::fabs(next.values[i] - m.values[i]));
    // the equilibrium defect is quadrature-level: a small fraction of the
    // collision turnover dt * nu * max f
    const double nu = collision_frequency_estimate(m, cfg.params, cfg.sigma.theta_min);
    CHECK(dmax <= 0.05 * dt * nu * m.max_value());
}

TEST_CASE("euler step reproduces f + dt Q pointwise against the oracle") {
    auto cfg = small_config();
    cfg.conserve_projection = false;
    cfg.clip_negative = false;
    auto f = make_maxwellian_bump<2>(cfg.grid, 1.0, 0.6, 0.2, 0.7, 1.0,
                                     Interp::multilinear);
    const double dt = 1e-3;
    const auto next = step(f, cfg, dt);
    const int n = cfg.grid.n_per_axis;
    double scale = f.max_value();
    for (int iy = 8; iy < n - 8; iy += 7) {
        for (int ix = 8; ix < n - 8; ix += 7) {
            const std::size_t i = static_cast<std::size_t>(iy) * n + ix;
            const auto q = q_sigma_oracle(f, cfg.grid.node(i), cfg.params, cfg.sigma);
            CHECK(next.values[i] ==
                  Catch::Approx(f.values[i] + dt * q.value).margin(1e-9 * scale));
        }
    }
}

TEST_CASE("rk2 stepping stays close to euler at small dt") {
    auto cfg = small_config();
    auto f = make_maxwellian_bump<2>(cfg.grid, 1.0, 0.6, 0.2, 0.7, 1.0,
                                     Interp::multilinear);
    const double dt = 0.25 * dt_stability(f, cfg);
    cfg.stepper = Stepper::explicit_euler;
    const auto e1 = step(f, cfg, dt);
    cfg.stepper = Stepper::rk2;
    const auto e2 = step(f, cfg, dt);
    double dmax = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        dmax = std::max(dmax, std::fabs(e1.values[i] - e2.values[i]));
    CHECK(dmax <= 0.5 * dt * f.max_value());  // O(dt^2) difference
}

TEST_CASE("projection enforces the collision invariants per step") {
    auto cfg = small_config();
    auto f = make_maxwellian_bump<2>(cfg.grid, 1.0, 0.6, 0.25, 0.8, 1.1,
                                     Interp::multilinear);
    const double dt = 0.5 * dt_stability(f, cfg);
    cfg.clip_negative = false;
    const auto next = step(f, cfg, dt);
    const double cell = cfg.grid.h() * cfg.grid.h();
    double dm = 0.0, dpx = 0.0, de = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double diff = next.values[i] - f.values[i];
        const Vec<2> v = cfg.grid.node(i);
        dm += diff;
        dpx += diff * v[0];
        de += diff * norm2(v);
    }
    const double M = hydro_fields(f).mass;
    CHECK(std::fabs(dm * cell) <= 1e-12 * M);
    CHECK(std::fabs(dpx * cell) <= 1e-12 * M);
    CHECK(std::fabs(de * cell) <= 1e-11 * hydro_fields(f).energy + 1e-14);
}

TEST_CASE("simulate: conservation, entropy decay, trace recording") {
    auto cfg = small_config();
    cfg.t_end = 0.05;
    cfg.moment_qs = {0.0, 3.0};
    auto f0 = make_maxwellian_bump<2>(cfg.grid, 1.0, 0.6, 0.3, 0.8, 1.0,
                                      Interp::multilinear);
    const auto res = simulate(cfg, f0);
    REQUIRE(res.trace.times.size() >= 3);

    const double M0 = res.trace.mass.front();
    for (double m : res.trace.mass) CHECK(std::fabs(m - M0) <= 1e-3 * M0);

    // H-theorem for the truncated discrete operator: verified empirically,
    // small per-step violations beyond tolerance are flagged
    for (std::size_t k = 1; k < res.trace.entropy.size(); ++k)
        CHECK(res.trace.entropy[k] <= res.trace.entropy[k - 1] + 1e-4);

    CHECK(res.trace.sup_weighted.size() == 2);
    CHECK(res.trace.sup_weighted[0].size() == res.trace.times.size());
    CHECK(res.trajectory.usable_for_verification);
    CHECK(res.trajectory.snapshots.size() == res.trace.times.size());

    // dt validation
    cfg.dt = 10.0 * dt_stability(f0, cfg);
    CHECK_THROWS_AS(simulate(cfg, f0), OutOfRange);
}

TEST_CASE("blow-up guard") {
    auto cfg = small_config();
    auto f = make_maxwellian<2>(cfg.grid, 1.0, 0.6);
    std::vector<double> crazy = f.values;
    crazy[10] = 2e12;
    GridDistribution<2> fc(cfg.grid, std::move(crazy), f.interp);
    CHECK_THROWS_AS(step(fc, cfg, 1.0), BlowUp);
}

TEST_CASE("snapshot file carries the header and node rows") {
    auto cfg = small_config();
    auto f = make_maxwellian<2>(cfg.grid, 1.0, 0.6);
    const std::string path = "/tmp/kb_test_snapshot.csv";
    write_snapshot(path, f, 0.25);
    std::ifstream is(path);
    REQUIRE(is.good());
    std::string header;
    std::getline(is, header);
    CHECK(header.find("# d=2") == 0);
    CHECK(header.find("t=0.25") != std::string::npos);
    std::size_t rows = 0;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == f.grid.size());
    std::remove(path.c_str());
}

TEST_CASE("three-dimensional solver on a tiny grid") {
    SolverConfig<3> cfg;
    cfg.params.d = 3;
    cfg.params.gamma = 0.5;
    cfg.params.s = 0.3;
    cfg.grid = VelocityGrid<3>(3.0, 8);
    cfg.sigma.theta_min = 0.4;
    cfg.sigma.theta_per_decade = 3;
    cfg.sigma.coarse_theta = true;
    cfg.sigma.with_error = false;
    cfg.sigma.phi_count = 6;
    auto f = make_maxwellian<3>(cfg.grid, 1.0, 0.5, Interp::multilinear);
    const double dt = 0.5 * dt_stability(f, cfg);
    const auto next = step(f, cfg, dt);
    double rel = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        rel = std::max(rel, std::fabs(next.values[i] - f.values[i]));
    CHECK(rel <= 0.05 * f.max_value());
}
