#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "kinetic_barrier/angular.hpp"
#include "kinetic_barrier/grid.hpp"
#include "kinetic_barrier/params.hpp"
#include "kinetic_barrier/quadrature.hpp"
#include "kinetic_barrier/vec.hpp"

namespace kb {

// Quadrature controls shared by the hyperplane-integral evaluators.
struct KernelOpts {
    double r_plane = 0.0;    // hyperplane truncation radius; 0 -> 4 r_max
    int per_decade = 5;      // radial grading of plane quadrature
    int plane_angles = 12;   // in-plane angles (d = 3 only)
    double theta_min = 0.0;  // angular truncation; 0 = untruncated
    bool with_indicator = true;  // accumulate interpolation-error indicators
};

namespace detail {

// cos(theta) from the Carleman pair geometry: |u| = |v - v'_*|, |w| = |v - v'|.
inline double cos_theta_carleman(double u_abs, double w_abs) {
    return (u_abs * u_abs - w_abs * w_abs) / (u_abs * u_abs + w_abs * w_abs);
}

// Jacobian factor of the (v_*, sigma) -> (v', v'_*) change of variables:
// dv_* dsigma = 2^{d-1} |v-v'|^{-1} |v-v_*|^{-(d-2)} dv' dv'_*. Keeping it
// in the kernel makes the Carleman evaluations agree with the direct
// sigma-representation quadrature, not just up to a constant.
inline double carleman_jacobian(int d) { return std::pow(2.0, d - 1); }

// Bound on the neglected plane integral beyond radius R for a power-law
// tail distribution. Returns +inf when the tail decays too slowly for the
// integral to converge, so callers report an honest unbounded estimate.
template <int D>
double plane_tail_remainder(const GridDistribution<D>& f, double v_abs, double R,
                            double exponent_u /* gamma+2s+1 */) {
    const double angle = (D == 2) ? 2.0 : 2.0 * std::numbers::pi;
    if (f.tail.kind == TailModel::Kind::zero) {
        const double reach = f.grid.support_radius() + v_abs;
        if (R >= reach) return 0.0;
        auto fn = [&](double t) { return std::pow(t, (D - 2) + exponent_u); };
        return angle * f.max_value() * quad_gl8(fn, R, reach);
    }
    const double qt = f.tail.q_tail;
    const double net = (D - 2) + exponent_u - qt;  // plane-radial exponent
    if (net >= -1.0 || R <= 2.0 * v_abs)
        return std::numeric_limits<double>::infinity();
    const double rho0 = f.grid.support_radius();
    // On the plane |x| >= |u| - |v| >= |u|/2 for |u| >= 2|v|.
    const double amp = f.tail.amplitude * f.max_value() * std::pow(2.0 * rho0, qt);
    return angle * amp * std::pow(R, net + 1.0) / (-(net + 1.0));
}

// Hyperplane integral through v orthogonal to w:
//   Int_{u in w-perp, |w| <= |u| <= u_hi} chi(v+u) f(v+u)
//       |u|^{gamma+2s+1} btilde(cos th) dH^{d-1}(u)
// Radial panels are log-graded with linear refinement where the ray crosses
// the sampled support (so localized cores far from v are not missed).
template <int D, class Chi>
Estimate kf_plane_integral(const GridDistribution<D>& f, const Vec<D>& v,
                           const Vec<D>& w, const KernelParams& p,
                           const KernelOpts& opts, const Chi& chi) {
    const double w_abs = norm(w);
    const double r_plane = opts.r_plane > 0.0 ? opts.r_plane : 4.0 * f.grid.r_max;
    double u_hi = r_plane;
    if (opts.theta_min > 0.0)
        u_hi = std::min(u_hi, w_abs / std::tan(0.5 * opts.theta_min));
    const double u_lo = w_abs;  // theta <= pi/2
    const double expo = p.gamma + 2.0 * p.s + 1.0;

    Estimate plane;
    if (u_lo >= u_hi) return plane;

    const Vec<D> what = (1.0 / w_abs) * w;
    const PlaneBasis<D> frame(what);
    const double h = f.grid.h();
    const double ball = f.grid.support_radius() + 2.0 * h;

    auto integrate_ray = [&](const Vec<D>& e) {
        std::vector<std::pair<double, double>> windows{ray_ball_window(v, e, ball)};
        const auto edges =
            refined_log_panels(u_lo, u_hi, opts.per_decade, windows, 2.0 * h);
        auto fn = [&](double t) -> Estimate {
            const Vec<D> x = v + t * e;
            if (!chi(x)) return {};
            double val, ind = 0.0;
            if (opts.with_indicator) {
                const auto vi = f.eval_with_indicator(x);
                val = vi.first;
                ind = vi.second;
            } else {
                val = f.eval(x);
            }
            if (val == 0.0 && ind == 0.0) return {};
            double common =
                std::pow(t, expo) * p.btilde_at(cos_theta_carleman(t, w_abs));
            if constexpr (D == 3) common *= t;  // polar measure
            return Estimate{val * common, ind * common};
        };
        Estimate acc;
        for (std::size_t i = 0; i + 1 < edges.size(); ++i)
            acc += quad_gl8_est2(fn, edges[i], edges[i + 1]);
        return acc;
    };

    if constexpr (D == 2) {
        plane += integrate_ray(frame.b1);
        plane += integrate_ray(-frame.b1);
    } else {
        const int na = std::max(4, opts.plane_angles);
        const double aw = 2.0 * std::numbers::pi / na;
        for (int ia = 0; ia < na; ++ia) {
            const double phi = aw * (ia + 0.5);
            plane += aw * integrate_ray(std::cos(phi) * frame.b1 +
                                        std::sin(phi) * frame.b2);
        }
    }

    plane.error += plane_tail_remainder(f, norm(v), u_hi, expo);
    return plane;
}

}  // namespace detail

// Carleman kernel
//   K_f(v,v') = |v'-v|^{-d-2s} Int_{v'_* in v + (v'-v)^perp}
//                  f(v'_*) |v-v'_*|^{gamma+2s+1} btilde(cos th) dv'_* ,
// with the deviation angle restricted to (0, pi/2], i.e. |v-v'_*| >= |v-v'|
// on the plane, and optionally th >= theta_min (matched truncations for
// oracle comparisons).
template <int D>
Estimate kernel_kf(const GridDistribution<D>& f, const Vec<D>& v, const Vec<D>& vprime,
                   const KernelParams& p, const KernelOpts& opts = {}) {
    const Vec<D> w = vprime - v;
    const double w_abs = norm(w);
    if (w_abs < 1e-12 * f.grid.h()) throw DegeneratePair("kernel_kf: |v'-v| ~ 0");
    const Estimate plane = detail::kf_plane_integral(
        f, v, w, p, opts, [](const Vec<D>&) { return true; });
    const double pref =
        detail::carleman_jacobian(p.d) * std::pow(w_abs, -(p.d + 2.0 * p.s));
    return Estimate{pref * plane.value, pref * plane.error};
}

}  // namespace kb
