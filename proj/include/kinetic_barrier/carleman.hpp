#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <utility>
#include <vector>

#include "kinetic_barrier/angular.hpp"
#include "kinetic_barrier/grid.hpp"
#include "kinetic_barrier/kernel.hpp"
#include "kinetic_barrier/params.hpp"
#include "kinetic_barrier/quadrature.hpp"
#include "kinetic_barrier/vec.hpp"

namespace kb {

// Principal-value realization. Symmetric pairing integrates antipodal pairs
// jointly (second-difference form) and is mandatory for s >= 1/2;
// radius_exclusion simply cuts |w| < r_pv and is only admissible below that.
struct PVPolicy {
    enum class Mode { symmetric_pairing, radius_exclusion };
    Mode mode = Mode::symmetric_pairing;
    double r_pv = 0.0;

    void validate(const KernelParams& p) const {
        if (mode == Mode::radius_exclusion && p.s >= 0.5)
            throw PreconditionViolated("PVPolicy: radius_exclusion requires s < 1/2");
        if (mode == Mode::radius_exclusion && !(r_pv > 0.0))
            throw PreconditionViolated("PVPolicy: radius_exclusion needs r_pv > 0");
    }
};

struct CarlemanOpts {
    double r_plane = 0.0;      // inner hyperplane truncation; 0 -> auto
    double r_outer = 0.0;      // outer radial truncation; 0 -> auto
    int per_decade = 5;        // radial grading (inner planes)
    int shell_per_decade = 5;  // radial grading (outer shells)
    int n_dirs = 32;           // outer direction count
    int plane_angles = 12;     // in-plane angles (d = 3)
    double pv_rmin_factor = 0.25;  // PV inner cut = factor * h
    double theta_min = 0.0;        // matched angular truncation; 0 = none
    bool with_indicator = true;
    // Structure hints for the second argument g: radius of its sampled
    // support (0 when g is a closed-form barrier) and the refinement width
    // used where quadrature rays cross that ball.
    double g_support_radius = 0.0;
    double g_fine_width = 0.25;

    double resolved_r_plane(double r_max, double v_abs) const {
        return r_plane > 0.0 ? r_plane : std::max(4.0 * r_max, v_abs + 2.0 * r_max);
    }
    double resolved_r_outer(double r_max, double v_abs) const {
        return r_outer > 0.0 ? r_outer : std::max(4.0 * r_max, v_abs + 2.0 * r_max);
    }

    KernelOpts kernel_opts(double r_max, double v_abs) const {
        KernelOpts k;
        k.r_plane = resolved_r_plane(r_max, v_abs);
        k.per_decade = per_decade;
        k.plane_angles = plane_angles;
        k.theta_min = theta_min;
        k.with_indicator = with_indicator;
        return k;
    }
};

namespace detail {

// Refinement windows along the ray v + t e for evaluations of the barrier /
// contact composite g: the min(1,.) kink at |x| = 1 and the sampled-support
// ball when g is grid-backed.
template <int D>
void g_ray_windows(const Vec<D>& v, const Vec<D>& e, const CarlemanOpts& opts,
                   std::vector<std::pair<double, double>>& out) {
    const auto kink = ray_ball_window(v, e, 1.0);
    if (kink.second > kink.first) {
        out.emplace_back(kink.first - 0.15, kink.first + 0.15);
        out.emplace_back(kink.second - 0.15, kink.second + 0.15);
    }
    if (opts.g_support_radius > 0.0) {
        const auto ball = ray_ball_window(v, e, opts.g_support_radius);
        if (ball.second > ball.first) out.push_back(ball);
    }
}

// Geometric-tail estimate for a sequence of graded panel sums: bounds what
// lies inward of the first panel by the observed decay of the innermost one.
inline double graded_remainder(double innermost, double s) {
    const double ratio = std::pow(2.0, -(2.0 - 2.0 * s));  // second-difference decay
    return std::fabs(innermost) * ratio / std::max(1e-12, 1.0 - ratio);
}

// Bins contributions into radial octaves above t_lo; the PV shell sums must
// not grow toward the cut for the symmetric limit to exist.
struct OctaveBins {
    double t_lo = 0.0;
    double sums[3] = {0.0, 0.0, 0.0};

    void add(double t_mid, double value) {
        if (t_mid < 2.0 * t_lo) sums[0] += value;
        else if (t_mid < 4.0 * t_lo) sums[1] += value;
        else if (t_mid < 8.0 * t_lo) sums[2] += value;
    }
    void check(double scale, double growth = 2.0, double frac = 1e-4) const {
        // a genuine divergence grows toward the cut with a consistent sign
        // and at a material fraction of the result; sign-alternating or tiny
        // octaves are benign cancellation
        const bool same_sign = (sums[0] > 0) == (sums[1] > 0) &&
                               (sums[1] > 0) == (sums[2] > 0);
        const double p0 = std::fabs(sums[0]);
        const double p1 = std::fabs(sums[1]);
        const double p2 = std::fabs(sums[2]);
        if (same_sign && p0 > growth * p1 && p1 > growth * p2 && p0 > frac * scale)
            throw PVDivergence("principal value: inner shell sums diverge");
    }
};

// Inner integral of the reverse Carleman representation: for x = v + u on
// the outer ray,
//   J(v,u) = PV Int_{w perp u} chi(v+w) [g(v+w) - g(v)]
//                 btilde(cos th) |w|^{-(d-1+2s)} dw,
// restricted to |w| <= |u| (deviation angle <= pi/2) and, when truncating,
// |w| >= |u| tan(theta_min/2). Antipodal pairs are grouped as
//   1/2 (k+ + k-) [g+ + g- - 2 g0] + 1/2 (k+ - k-) [g+ - g-],
// an exact regrouping of the plain sum that stays stable through the PV cut.
template <int D, class G, class Chi>
Estimate inner_plane_pv(const G& g, const Vec<D>& v, const Vec<D>& u_hat, double u_abs,
                        const KernelParams& p, const Chi& chi, double g0, double h,
                        const PVPolicy& pv, const CarlemanOpts& opts) {
    const double kexp = -(p.d - 1 + 2.0 * p.s);
    double t_lo = (pv.mode == PVPolicy::Mode::radius_exclusion)
                      ? pv.r_pv
                      : opts.pv_rmin_factor * h;
    if (opts.theta_min > 0.0)
        t_lo = std::max(t_lo, u_abs * std::tan(0.5 * opts.theta_min));
    const double t_hi = u_abs;
    if (!(t_lo < t_hi)) return {};

    const PlaneBasis<D> frame(u_hat);

    int n_pairs = 1;            // d = 2: one in-plane direction pair
    double angle_weight = 1.0;  // line measure
    if constexpr (D == 3) {
        n_pairs = std::max(2, opts.plane_angles / 2);
        angle_weight = 2.0 * std::numbers::pi / (2.0 * n_pairs);
    }

    Estimate total;
    OctaveBins bins;
    bins.t_lo = t_lo;
    for (int ip = 0; ip < n_pairs; ++ip) {
        Vec<D> e;
        if constexpr (D == 2) {
            e = frame.b1;
        } else {
            const double phi = std::numbers::pi * (ip + 0.5) / n_pairs;
            e = std::cos(phi) * frame.b1 + std::sin(phi) * frame.b2;
        }
        std::vector<std::pair<double, double>> windows;
        g_ray_windows(v, e, opts, windows);
        g_ray_windows(v, -e, opts, windows);
        const auto edges = refined_log_panels(t_lo, t_hi, opts.per_decade, windows,
                                              opts.g_fine_width);
        auto pair_fn = [&](double t) {
            const Vec<D> wp = t * e;
            const Vec<D> xp = v + wp, xm = v - wp;
            const double bt = p.btilde_at(cos_theta_carleman(u_abs, t));
            const double kern = carleman_jacobian(p.d) * std::pow(t, kexp) * bt;
            const double kp = chi(xp) ? kern : 0.0;
            const double km = chi(xm) ? kern : 0.0;
            const double gp = g(xp), gm = g(xm);
            double val = 0.5 * (kp + km) * (gp + gm - 2.0 * g0) +
                         0.5 * (kp - km) * (gp - gm);
            if constexpr (D == 3) val *= t;  // polar measure
            return val;
        };
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            const Estimate pe = quad_gl8_est(pair_fn, edges[i], edges[i + 1]);
            total += angle_weight * pe;
            bins.add(0.5 * (edges[i] + edges[i + 1]), angle_weight * pe.value);
        }
    }

    if (pv.mode == PVPolicy::Mode::symmetric_pairing && opts.theta_min <= 0.0) {
        // local J values can legitimately vanish; only flag growth that
        // dominates this inner integral
        bins.check(std::fabs(total.value) + 1e-300, 4.0, 0.05);
        total.error += graded_remainder(bins.sums[0], p.s);
    }
    return total;
}

// Outer integral of the reverse representation over the annulus
// lo <= |v'_*| < hi (radii measured from the origin):
//   Int f1(v'_*) |v - v'_*|^{gamma+2s} J(v, v'_* - v) dv'_* .
template <int D, class G, class Chi>
Estimate reverse_outer(const GridDistribution<D>& f1, const G& g, const Vec<D>& v,
                       const KernelParams& p, const PVPolicy& pv,
                       const CarlemanOpts& opts, double lo, double hi,
                       const Chi& chi) {
    if (!(hi > lo)) return {};
    const double h = f1.grid.h();
    const double g0 = g(v);
    const auto dirs = direction_set<D>(opts.n_dirs);
    const double patch = sphere_measure(D - 1) / static_cast<double>(dirs.size());

    // radial edges: linear core panel then geometric grading
    std::vector<double> edges;
    const double start_log = std::max(h, lo);
    if (lo < start_log && start_log < hi) {
        edges.push_back(lo);
        for (double e : log_panels(start_log, hi, opts.shell_per_decade))
            edges.push_back(e);
    } else if (lo > 0.0) {
        edges = log_panels(lo, hi, opts.shell_per_decade);
    } else {
        edges = {lo, hi};
    }

    Estimate total;
    for (const auto& dir : dirs) {
        auto fn = [&](double t) -> Estimate {
            const Vec<D> x = t * dir;
            const Vec<D> u = x - v;
            const double u_abs = norm(u);
            if (u_abs < 1e-10) return {};
            double fv, find = 0.0;
            if (opts.with_indicator) {
                const auto vi = f1.eval_with_indicator(x);
                fv = vi.first;
                find = vi.second;
            } else {
                fv = f1.eval(x);
            }
            if (fv <= 0.0 && find <= 0.0) return {};
            const double radial = std::pow(t, D - 1);
            const Vec<D> u_hat = (1.0 / u_abs) * u;
            const Estimate J =
                inner_plane_pv(g, v, u_hat, u_abs, p, chi, g0, h, pv, opts);
            const double wgt = std::pow(u_abs, p.gamma + 2.0 * p.s) * radial;
            return Estimate{fv * J.value * wgt,
                            (fv * J.error + find * std::fabs(J.value)) * wgt};
        };
        for (std::size_t i = 0; i + 1 < edges.size(); ++i)
            total += patch * quad_gl8_est2(fn, edges[i], edges[i + 1]);
    }
    return total;
}

}  // namespace detail

// Convolution against C_S |u|^gamma: grid cells with sub-cell quadrature
// near the kink, an equal-volume ball rule on the singular cell for
// gamma < 0, and the power-law tail beyond the grid.
template <int D>
Estimate convolve_power(const GridDistribution<D>& f, const Vec<D>& v,
                        const KernelParams& p, double r_outer = 0.0) {
    const double h = f.grid.h();
    const double cell = std::pow(h, D);
    const std::size_t n = f.grid.size();
    double acc = 0.0, err = 0.0;

    const double near2 = (2.5 * h) * (2.5 * h);
    for (std::size_t j = 0; j < n; ++j) {
        const double fj = f.values[j];
        if (fj == 0.0) continue;
        const Vec<D> x = f.grid.node(j);
        const Vec<D> u = v - x;
        const double u2 = norm2(u);
        if (u2 > near2) {
            acc += fj * std::pow(u2, 0.5 * p.gamma) * cell;
            continue;
        }
        if (u2 < 0.25 * h * h && p.gamma < 0.0) {
            // equal-volume ball about the singular point
            const double r_eq = (D == 2)
                                    ? h / std::sqrt(std::numbers::pi)
                                    : h * std::pow(3.0 / (4.0 * std::numbers::pi), 1.0 / 3.0);
            const double ball =
                sphere_measure(D - 1) * std::pow(r_eq, D + p.gamma) / (D + p.gamma);
            acc += fj * ball;
            err += 0.25 * fj * ball;
            continue;
        }
        // 2^D-point Gauss rule per cell around the kink
        double sub = 0.0;
        const double g2 = 0.5 * h * 0.5773502691896258;
        if constexpr (D == 2) {
            for (int a = -1; a <= 1; a += 2)
                for (int b = -1; b <= 1; b += 2) {
                    const double ux = u[0] + a * g2, uy = u[1] + b * g2;
                    sub += std::pow(ux * ux + uy * uy, 0.5 * p.gamma);
                }
            sub *= 0.25 * cell;
        } else {
            for (int a = -1; a <= 1; a += 2)
                for (int b = -1; b <= 1; b += 2)
                    for (int c = -1; c <= 1; c += 2) {
                        const double ux = u[0] + a * g2, uy = u[1] + b * g2,
                                     uz = u[2] + c * g2;
                        sub += std::pow(ux * ux + uy * uy + uz * uz, 0.5 * p.gamma);
                    }
            sub *= 0.125 * cell;
        }
        acc += fj * sub;
    }

    Estimate out{acc, err};

    if (f.tail.kind == TailModel::Kind::power_law) {
        const double rho0 = f.grid.support_radius();
        const double v_abs = norm(v);
        const double R =
            r_outer > 0.0 ? r_outer : std::max(4.0 * f.grid.r_max, 2.0 * v_abs);
        const auto dirs = direction_set<D>(16);
        const double patch = sphere_measure(D - 1) / static_cast<double>(dirs.size());
        for (const auto& dir : dirs) {
            auto fn = [&](double t) {
                const Vec<D> x = t * dir;
                return f.eval(x) * std::pow(norm(v - x), p.gamma) * std::pow(t, D - 1);
            };
            out += patch * quad_log_panels(fn, rho0, R, 4);
        }
        const double net = p.gamma + (D - 1) - f.tail.q_tail;
        if (net < -1.0) {
            const double fmax_b = f.tail.amplitude * f.max_value();
            out.error += sphere_measure(D - 1) * fmax_b *
                         std::pow(rho0, f.tail.q_tail) * std::pow(R, net + 1.0) /
                         (-(net + 1.0));
        } else {
            out.error = std::numeric_limits<double>::infinity();
        }
    }
    return out;
}

// Q_ns(f1, f2)(v) = f2(v) (f1 * C_S |.|^gamma)(v).
template <int D>
Estimate q_ns_bilinear(const GridDistribution<D>& f1, double f2_at_v, const Vec<D>& v,
                       const KernelParams& p, const CancellationConstant& cs) {
    const Estimate conv = convolve_power(f1, v, p);
    return Estimate{f2_at_v * cs.value * conv.value,
                    std::fabs(f2_at_v) * (cs.value * conv.error +
                                          cs.quadrature_error * std::fabs(conv.value))};
}

template <int D>
Estimate q_ns(const GridDistribution<D>& f, const Vec<D>& v, const KernelParams& p,
              const CancellationConstant& cs) {
    return q_ns_bilinear(f, f.eval(v), v, p, cs);
}

template <int D>
Estimate q_ns(const GridDistribution<D>& f, const Vec<D>& v, const KernelParams& p,
              double theta_min = 0.0) {
    return q_ns(f, v, p, cancellation_constant(p, theta_min));
}

// Singular part in the forward Carleman representation:
//   Q_s(f1,f2)(v) = PV Int K_{f1}(v,v') [f2(v') - f2(v)] dv'.
template <int D, class G>
Estimate q_s_carleman(const GridDistribution<D>& f1, const G& g, const Vec<D>& v,
                      const KernelParams& p, const PVPolicy& pv = {},
                      CarlemanOpts opts = {}) {
    pv.validate(p);
    const double v_abs = norm(v);
    const double h = f1.grid.h();
    const double r_hi = opts.resolved_r_outer(f1.grid.r_max, v_abs);
    const KernelOpts kopts = opts.kernel_opts(f1.grid.r_max, v_abs);

    const double t_lo = (pv.mode == PVPolicy::Mode::radius_exclusion)
                            ? pv.r_pv
                            : opts.pv_rmin_factor * h;
    const auto dirs = direction_set<D>(opts.n_dirs);
    const std::size_t half = dirs.size() / 2;
    const double patch = sphere_measure(D - 1) / static_cast<double>(dirs.size());
    const double g0 = g(v);

    Estimate total;
    detail::OctaveBins bins;
    bins.t_lo = t_lo;
    double outermost = 0.0;
    for (std::size_t idir = 0; idir < half; ++idir) {
        const Vec<D>& e = dirs[idir];
        std::vector<std::pair<double, double>> windows;
        detail::g_ray_windows(v, e, opts, windows);
        detail::g_ray_windows(v, -e, opts, windows);
        const auto edges =
            refined_log_panels(t_lo, r_hi, opts.shell_per_decade, windows,
                               opts.g_fine_width);
        auto pair_fn = [&](double t) -> Estimate {
            const Vec<D> w = t * e;
            const Estimate Kp = kernel_kf(f1, v, v + w, p, kopts);
            const Estimate Km = kernel_kf(f1, v, v - w, p, kopts);
            const double gp = g(v + w), gm = g(v - w);
            const double val = 0.5 * (Kp.value + Km.value) * (gp + gm - 2.0 * g0) +
                               0.5 * (Kp.value - Km.value) * (gp - gm);
            const double err =
                (Kp.error + Km.error) * (std::fabs(gp - g0) + std::fabs(gm - g0));
            const double radial = std::pow(t, D - 1);
            return Estimate{val * radial, err * radial};
        };
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            // pair_fn already sums both antipodal directions of the pair
            const Estimate pe = quad_gl8_est2(pair_fn, edges[i], edges[i + 1]);
            total += patch * pe;
            bins.add(0.5 * (edges[i] + edges[i + 1]), patch * pe.value);
            if (0.5 * (edges[i] + edges[i + 1]) > 0.5 * r_hi)
                outermost += patch * pe.value;
        }
    }

    if (pv.mode == PVPolicy::Mode::symmetric_pairing) {
        bins.check(std::fabs(total.value) + 1e-300);
        total.error += detail::graded_remainder(bins.sums[0], p.s);
    }
    // outer remainder from the decay over the outermost octave
    const double ratio = std::pow(2.0, -2.0 * p.s);
    total.error += std::fabs(outermost) * ratio / (1.0 - ratio);
    return total;
}

// Singular part in the reverse representation.
template <int D, class G>
Estimate q_s_reverse(const GridDistribution<D>& f1, const G& g, const Vec<D>& v,
                     const KernelParams& p, const PVPolicy& pv = {},
                     CarlemanOpts opts = {}) {
    pv.validate(p);
    const double v_abs = norm(v);
    const double r_hi = opts.resolved_r_outer(f1.grid.r_max, v_abs);
    return detail::reverse_outer(f1, g, v, p, pv, opts, 0.0, r_hi,
                                 [](const Vec<D>&) { return true; });
}

// Lemma-style inner integral on its own: the hyperplane through v
// orthogonal to v - v'_*, integrating [g(v') - g(v)] against the
// btilde-weighted |w|^{-(d-1)-2s} kernel. Used by the verifier.
template <int D, class G>
Estimate inner_integral(const G& g, const Vec<D>& v, const Vec<D>& v_star_prime,
                        const KernelParams& p, double grid_h, const PVPolicy& pv = {},
                        const CarlemanOpts& opts = {}) {
    const Vec<D> u = v_star_prime - v;
    const double u_abs = norm(u);
    if (!(u_abs > 0.0)) throw PreconditionViolated("inner_integral: v'_* = v");
    return detail::inner_plane_pv(
        g, v, (1.0 / u_abs) * u, u_abs, p, [](const Vec<D>&) { return true; }, g(v),
        grid_h, pv, opts);
}

// One term of the forward-representation bad-part decomposition:
//   Int_{lo <= |v'| < hi} [g(v') - g(v)] |v-v'|^{-d-2s}
//       Int_{v'_* in v + (v-v')^perp, |v'_*| >= c1|v|}
//           f(v'_*) |v-v'_*|^{gamma+2s+1} btilde dv'_*  dv'.
template <int D, class G>
Estimate forward_bad_term(const GridDistribution<D>& f, const G& g, const Vec<D>& v,
                          const KernelParams& p, const CarlemanOpts& opts,
                          double c1_radius, double lo, double hi) {
    if (!(hi > lo)) return {};
    const double v_abs = norm(v);
    const KernelOpts kopts = opts.kernel_opts(f.grid.r_max, v_abs);
    const double g0 = g(v);
    const auto dirs = direction_set<D>(opts.n_dirs);
    const double patch = sphere_measure(D - 1) / static_cast<double>(dirs.size());
    const double h = f.grid.h();

    const double c1r2 = c1_radius * c1_radius;
    auto chi_tilde = [&](const Vec<D>& x) { return norm2(x) >= c1r2; };

    Estimate total;
    for (const auto& dir : dirs) {
        // radial panels over [lo, hi] along dir, refined across the g-kink
        std::vector<std::pair<double, double>> windows{{0.85, 1.15}};
        if (opts.g_support_radius > 0.0) windows.push_back({0.0, opts.g_support_radius});
        std::vector<double> edges;
        if (lo > 0.0) {
            edges = refined_log_panels(lo, hi, opts.shell_per_decade, windows,
                                       opts.g_fine_width);
        } else {
            const double start = std::min(std::max(0.5 * h, 1e-3 * hi), 0.5 * hi);
            edges = refined_log_panels(start, hi, opts.shell_per_decade, windows,
                                       opts.g_fine_width);
            edges.insert(edges.begin(), 0.0);
        }
        auto fn = [&](double t) -> Estimate {
            const Vec<D> vp = t * dir;
            const Vec<D> w = vp - v;
            const double w_abs = norm(w);
            if (w_abs < 1e-10) return {};
            const Estimate plane =
                detail::kf_plane_integral(f, v, w, p, kopts, chi_tilde);
            const double kern = detail::carleman_jacobian(p.d) *
                                std::pow(w_abs, -(p.d + 2.0 * p.s));
            const double gdiff = g(vp) - g0;
            const double radial = std::pow(t, D - 1);
            return Estimate{gdiff * kern * plane.value * radial,
                            std::fabs(gdiff) * kern * plane.error * radial};
        };
        for (std::size_t i = 0; i + 1 < edges.size(); ++i)
            total += patch * quad_gl8_est2(fn, edges[i], edges[i + 1]);
    }
    return total;
}

// Five-way evaluation of the collision operator at v against the second
// argument g: Q = G + B1 + B2 + B3 + Q_ns, with `total` computed
// independently as q_s_reverse + q_ns so the recombination identity is a
// genuine cross-check. q = 0 puts the whole singular part in the good term
// (c1(0) = +inf), matching the constant-barrier argument.
struct SplitResult {
    Estimate good, bad1, bad2, bad3, q_ns_term, total;
    double q = 0.0;

    double parts_sum() const {
        return good.value + bad1.value + bad2.value + bad3.value + q_ns_term.value;
    }
    double recombination_defect() const { return total.value - parts_sum(); }
    double combined_error() const {
        return good.error + bad1.error + bad2.error + bad3.error + q_ns_term.error +
               total.error;
    }
};

template <int D, class G>
SplitResult split_operator(const GridDistribution<D>& f, const G& g, const Vec<D>& v,
                           double q, const KernelParams& p,
                           const CancellationConstant& cs, const PVPolicy& pv = {},
                           CarlemanOpts opts = {}) {
    pv.validate(p);
    const double v_abs = norm(v);
    if (!(v_abs > 0.0)) throw PreconditionViolated("split_operator: |v| > 0 required");
    if (q < 0.0) throw PreconditionViolated("split_operator: q >= 0 required");

    const double r_hi = opts.resolved_r_outer(f.grid.r_max, v_abs);
    const double c1 = splitting_c1(q);
    const double c3 = splitting_c3(q);
    const double good_hi = std::min(c1 * v_abs, r_hi);

    SplitResult out;
    out.q = q;

    auto chi_all = [](const Vec<D>&) { return true; };
    out.good = detail::reverse_outer(f, g, v, p, pv, opts, 0.0, good_hi, chi_all);

    if (good_hi < r_hi) {
        const double half_v2 = 0.25 * v_abs * v_abs;
        auto chi1 = [half_v2](const Vec<D>& x) { return norm2(x) > half_v2; };
        out.bad1 = detail::reverse_outer(f, g, v, p, pv, opts, good_hi, r_hi, chi1);
        out.bad2 = forward_bad_term(f, g, v, p, opts, c1 * v_abs, 0.0, c3 * v_abs);
        out.bad3 =
            forward_bad_term(f, g, v, p, opts, c1 * v_abs, c3 * v_abs, 0.5 * v_abs);
    }

    out.q_ns_term = q_ns_bilinear(f, g(v), v, p, cs);
    out.total = q_s_reverse(f, g, v, p, pv, opts) + out.q_ns_term;
    return out;
}

}  // namespace kb
