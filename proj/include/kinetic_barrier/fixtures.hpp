#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "kinetic_barrier/errors.hpp"
#include "kinetic_barrier/grid.hpp"
#include "kinetic_barrier/vec.hpp"

namespace kb {

// Standard sample distributions used by the verifier and the test suites.

template <int D>
double maxwellian_value(const Vec<D>& v, double mass, double temperature,
                        const Vec<D>& center = {}) {
    const double norm_c = mass / std::pow(2.0 * std::numbers::pi * temperature, 0.5 * D);
    return norm_c * std::exp(-norm2(v - center) / (2.0 * temperature));
}

template <int D>
GridDistribution<D> make_maxwellian(const VelocityGrid<D>& g, double mass = 1.0,
                                    double temperature = 1.0,
                                    Interp ip = Interp::tricubic,
                                    TailModel tm = TailModel::zero()) {
    return GridDistribution<D>::sample(
        g, [&](const Vec<D>& v) { return maxwellian_value<D>(v, mass, temperature); },
        ip, tm);
}

// Maxwellian plus a displaced Gaussian bump; the default perturbation is
// strong enough that the collision operator is far from zero.
template <int D>
GridDistribution<D> make_maxwellian_bump(const VelocityGrid<D>& g, double mass = 1.0,
                                         double temperature = 1.0,
                                         double bump_amp = 0.05,
                                         double bump_sigma = 0.7,
                                         double bump_offset = 2.0,
                                         Interp ip = Interp::tricubic,
                                         TailModel tm = TailModel::zero()) {
    Vec<D> c{};
    c[0] = bump_offset;
    return GridDistribution<D>::sample(
        g,
        [&](const Vec<D>& v) {
            const double base = maxwellian_value<D>(v, mass, temperature);
            const double b =
                bump_amp * std::exp(-norm2(v - c) / (2.0 * bump_sigma * bump_sigma));
            return base + b;
        },
        ip, tm);
}

template <int D>
GridDistribution<D> make_two_bump(const VelocityGrid<D>& g, double mass = 1.0,
                                  double temperature = 0.5, double offset = 2.0,
                                  Interp ip = Interp::tricubic) {
    Vec<D> c1{}, c2{};
    c1[0] = offset;
    c2[0] = -offset;
    return GridDistribution<D>::sample(
        g,
        [&](const Vec<D>& v) {
            return maxwellian_value<D>(v, 0.5 * mass, temperature, c1) +
                   maxwellian_value<D>(v, 0.5 * mass, temperature, c2);
        },
        ip, TailModel::zero());
}

// Maxwellian core plus an algebraic tail ~ (1+|v|^2)^{-q_tail/2}; the grid
// tail model continues the same decay beyond the grid.
template <int D>
GridDistribution<D> make_heavy_tail(const VelocityGrid<D>& g, double core_mass = 1.0,
                                    double core_temperature = 0.5,
                                    double tail_amp = 0.25, double tail_exponent = 4.5,
                                    Interp ip = Interp::tricubic) {
    return GridDistribution<D>::sample(
        g,
        [&](const Vec<D>& v) {
            return maxwellian_value<D>(v, core_mass, core_temperature) +
                   tail_amp * std::pow(1.0 + norm2(v), -0.5 * tail_exponent);
        },
        ip, TailModel::power_law(tail_exponent));
}

// Narrow-core Maxwellian used for exponent sweeps of the good term: the
// c1(q)|v| ball captures essentially all mass across the |v| sweep.
template <int D>
GridDistribution<D> make_narrow_core(const VelocityGrid<D>& g, double mass = 1.0,
                                     double sigma = 0.08,
                                     Interp ip = Interp::tricubic) {
    return make_maxwellian<D>(g, mass, sigma * sigma, ip);
}

// Energy-critical profile A (eps^2 + rho^2)^{-(d+2)/2}: the mass beyond
// radius r falls off like r^{-2} once r clears the knee, which is the
// configuration saturating the energy-weighted bad-term bounds across an
// exclusion-radius sweep.
template <int D>
GridDistribution<D> make_energy_critical(const VelocityGrid<D>& g, double amp = 0.25,
                                         double knee = 0.3,
                                         Interp ip = Interp::tricubic) {
    const double expo = D + 2.0;
    const double k2 = knee * knee;
    return GridDistribution<D>::sample(
        g,
        [&](const Vec<D>& v) { return amp * std::pow(k2 + norm2(v), -0.5 * expo); },
        ip, TailModel::power_law(expo));
}

// Anisotropic slowly-decaying profile: a ~1/rho radial shell profile
// concentrated in narrow angular jets around the +/- e2 axis, continued by
// a q_tail = 1 power tail. Drives the logarithmic factor in the
// not-so-large-q bad-term bound.
inline GridDistribution<2> make_polar_jet(const VelocityGrid<2>& g, double amp = 1.0,
                                          double angular_sigma = 0.045,
                                          Interp ip = Interp::tricubic) {
    return GridDistribution<2>::sample(
        g,
        [&](const Vec<2>& v) {
            const double rho2 = norm2(v);
            const double radial = amp / std::sqrt(0.25 + rho2);
            if (rho2 < 1e-12) return radial;
            const double ang = std::atan2(v[1], v[0]);
            const double d1 = ang - 0.5 * std::numbers::pi;
            const double d2 = ang + 0.5 * std::numbers::pi;
            const double jets = std::exp(-0.5 * d1 * d1 / (angular_sigma * angular_sigma)) +
                                std::exp(-0.5 * d2 * d2 / (angular_sigma * angular_sigma));
            return radial * jets;
        },
        ip, TailModel::power_law(1.0));
}

// Deliberately vacuum-like input: tiny mass, used for NoCore negative tests.
template <int D>
GridDistribution<D> make_vacuum_like(const VelocityGrid<D>& g) {
    return GridDistribution<D>::sample(
        g, [&](const Vec<D>&) { return 0.0; }, Interp::multilinear);
}

template <int D>
GridDistribution<D> make_fixture(const std::string& name, const VelocityGrid<D>& g) {
    if (name == "maxwellian") return make_maxwellian<D>(g);
    if (name == "maxwellian_bump") return make_maxwellian_bump<D>(g);
    if (name == "two_bump") return make_two_bump<D>(g);
    if (name == "heavy_tail") return make_heavy_tail<D>(g);
    if (name == "narrow_core") return make_narrow_core<D>(g);
    if (name == "vacuum") return make_vacuum_like<D>(g);
    if constexpr (D == 2) {
        if (name == "polar_jet") return make_polar_jet(g);
    }
    throw ConfigError("unknown fixture: " + name);
}

}  // namespace kb
