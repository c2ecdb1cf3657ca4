#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "kinetic_barrier/errors.hpp"
#include "kinetic_barrier/grid.hpp"
#include "kinetic_barrier/kernel.hpp"
#include "kinetic_barrier/params.hpp"
#include "kinetic_barrier/quadrature.hpp"
#include "kinetic_barrier/vec.hpp"

namespace kb {

// Hydrodynamic fields and the configured bounds 0 < m0 <= M <= M0,
// E <= E0, H <= H0.
struct HydroBounds {
    double m0 = 0.1, M0 = 10.0, E0 = 20.0, H0 = 20.0;
};

struct HydroState {
    double mass = 0.0, energy = 0.0, entropy = 0.0;
    HydroBounds bounds;

    bool satisfies_1_3() const {
        return mass >= bounds.m0 && mass <= bounds.M0 && energy <= bounds.E0 &&
               entropy <= bounds.H0 && bounds.m0 > 0.0;
    }
};

// M = sum f h^d, E = sum f |v|^2 h^d, H = sum f ln f h^d  (0 ln 0 := 0).
template <int D>
HydroState hydro_fields(const GridDistribution<D>& f, HydroBounds bounds = {}) {
    HydroState st;
    st.bounds = bounds;
    const double cell = std::pow(f.grid.h(), D);
    double M = 0.0, E = 0.0, H = 0.0;
    for (std::size_t i = 0; i < f.grid.size(); ++i) {
        const double fi = f.values[i];
        if (fi == 0.0) continue;
        M += fi;
        E += fi * norm2(f.grid.node(i));
        H += fi * std::log(fi);
    }
    st.mass = M * cell;
    st.energy = E * cell;
    st.entropy = H * cell;
    return st;
}

// Mass core: node set where f >= c0 inside |v| <= R0, located by a ladder
// search over c0 in {2^-k} and R0 in {2^j}. The measure target follows a
// Chebyshev split of the hydrodynamic bounds.
template <int D>
struct MassCore {
    double c0 = 0.0;
    double R0 = 0.0;
    std::vector<std::size_t> node_set;
    double measure = 0.0;
};

inline double mass_core_target(const HydroBounds& b, double guard = 1.0) {
    return b.m0 / (4.0 * (1.0 + b.E0 / b.m0 + guard));
}

template <int D>
MassCore<D> mass_core(const GridDistribution<D>& f, const HydroBounds& bounds,
                      double guard = 1.0) {
    const HydroState st = hydro_fields(f, bounds);
    if (!st.satisfies_1_3())
        throw NoCore("mass_core: input violates the hydrodynamic bounds");
    const double target = mass_core_target(bounds, guard);
    const double cell = std::pow(f.grid.h(), D);

    const int j_max =
        std::max(1, static_cast<int>(std::ceil(std::log2(f.grid.r_max * std::sqrt(double(D)))))) + 1;
    for (int k = 0; k <= 60; ++k) {
        const double c0 = std::pow(2.0, -k);
        for (int j = 0; j <= j_max; ++j) {
            const double R0 = std::pow(2.0, j);
            MassCore<D> core;
            core.c0 = c0;
            core.R0 = R0;
            for (std::size_t i = 0; i < f.grid.size(); ++i) {
                if (f.values[i] >= c0 && norm(f.grid.node(i)) <= R0)
                    core.node_set.push_back(i);
            }
            core.measure = static_cast<double>(core.node_set.size()) * cell;
            if (core.measure >= target) return core;
        }
    }
    throw NoCore("mass_core: ladder exhausted");
}

// Cone of non-degeneracy at v: antipodally symmetric directions omega whose
// hyperplane integral of the core indicator through v is at least lambda
// (half the median positive value), with kernel lower-bound certificates.
template <int D>
struct NondegeneracyCone {
    Vec<D> v{};
    std::vector<Vec<D>> directions;          // accepted omega (antipodal pairs)
    std::vector<double> plane_integrals;     // matching hyperplane integrals
    double lambda = 0.0;                     // acceptance threshold
    double C0_empirical = 0.0;               // max |v . omega| over accepted
    double min_certificate = 0.0;            // min K_f / lower-bound form
    bool empty = false;

    // |cone cap B_r| estimated from the accepted direction fraction
    double measure_in_ball(double r, int total_dirs) const {
        const double frac =
            static_cast<double>(directions.size()) / static_cast<double>(total_dirs);
        const double ball = (D == 2) ? std::numbers::pi * r * r
                                     : 4.0 / 3.0 * std::numbers::pi * r * r * r;
        return frac * ball;
    }
};

struct ConeOpts {
    int n_dirs = 256;
    double certificate_r = 1.0;  // sample radius for the kernel certificate
    KernelOpts kernel;
};

template <int D>
NondegeneracyCone<D> nondegeneracy_cone(const GridDistribution<D>& f,
                                        const MassCore<D>& core, const Vec<D>& v,
                                        const KernelParams& p, ConeOpts opts = {}) {
    if (core.node_set.empty()) throw PreconditionViolated("nondegeneracy_cone: empty core");
    NondegeneracyCone<D> cone;
    cone.v = v;

    // core membership bitmap
    std::vector<char> in_core(f.grid.size(), 0);
    for (std::size_t i : core.node_set) in_core[i] = 1;
    const int n = f.grid.n_per_axis;
    const double h = f.grid.h();
    auto core_at = [&](const Vec<D>& x) -> bool {
        std::size_t lin = 0;
        for (int k = D - 1; k >= 0; --k) {
            const double idx = (x[k] + f.grid.r_max) / h - 0.5;
            const int i = static_cast<int>(std::lround(idx));
            if (i < 0 || i >= n) return false;
            lin = lin * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
        }
        return in_core[lin] != 0;
    };

    const auto dirs = direction_set<D>(opts.n_dirs);
    const double step = 0.5 * h;
    const double reach = core.R0 + norm(v) + h;
    std::vector<double> integrals(dirs.size(), 0.0);

    for (std::size_t di = 0; di < dirs.size() / 2; ++di) {
        const PlaneBasis<D> frame(dirs[di]);
        double acc = 0.0;
        if constexpr (D == 2) {
            for (double t = -reach; t <= reach; t += step)
                if (core_at(plane_point(v, frame, t))) acc += step;
        } else {
            for (double t1 = -reach; t1 <= reach; t1 += step)
                for (double t2 = -reach; t2 <= reach; t2 += step)
                    if (core_at(plane_point(v, frame, t1, t2))) acc += step * step;
        }
        integrals[di] = acc;
        integrals[di + dirs.size() / 2] = acc;  // symmetric by construction
    }

    std::vector<double> positive;
    for (std::size_t di = 0; di < dirs.size() / 2; ++di)
        if (integrals[di] > 0.0) positive.push_back(integrals[di]);
    if (positive.empty()) {
        cone.empty = true;
        return cone;
    }
    std::sort(positive.begin(), positive.end());
    cone.lambda = 0.5 * positive[positive.size() / 2];

    const double v_abs = norm(v);
    cone.min_certificate = std::numeric_limits<double>::infinity();
    for (std::size_t di = 0; di < dirs.size(); ++di) {
        if (!(integrals[di] >= cone.lambda)) continue;
        cone.directions.push_back(dirs[di]);
        cone.plane_integrals.push_back(integrals[di]);
        cone.C0_empirical = std::max(cone.C0_empirical, std::fabs(dot(v, dirs[di])));
        if (di < dirs.size() / 2) {
            const Vec<D> vp = v + opts.certificate_r * dirs[di];
            try {
                const double K = kernel_kf(f, v, vp, p, opts.kernel).value;
                const double form = std::pow(1.0 + v_abs, 1.0 + 2.0 * p.s + p.gamma) *
                                    std::pow(opts.certificate_r, -(p.d + 2.0 * p.s));
                cone.min_certificate = std::min(cone.min_certificate, K / form);
            } catch (const DegeneratePair&) {
            }
        }
    }
    if (cone.directions.empty()) cone.empty = true;
    return cone;
}

}  // namespace kb
