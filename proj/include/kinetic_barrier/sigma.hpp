#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "kinetic_barrier/angular.hpp"
#include "kinetic_barrier/grid.hpp"
#include "kinetic_barrier/parallel.hpp"
#include "kinetic_barrier/params.hpp"
#include "kinetic_barrier/quadrature.hpp"
#include "kinetic_barrier/vec.hpp"

namespace kb {

// Direct sigma-representation quadrature of the collision operator,
// truncated at deviation angles theta >= theta_min (the untruncated
// integrand is not absolutely integrable). Serves as the independent ground
// truth for Carleman evaluations with matched truncation, and as the
// stepping operator of the homogeneous solver.
struct SigmaOpts {
    double theta_min = 0.1;
    int theta_per_decade = 6;  // graded panels on [theta_min, pi/2]
    bool coarse_theta = false; // GL4 panels (stepping fast path)
    int phi_count = 12;        // azimuthal samples (d = 3)
    bool with_error = true;    // accumulate an error estimate (oracle path)
};

namespace detail {

struct ThetaNode {
    double cos_t, sin_t, weight;  // weight includes b(cos t) (sin t)^{d-2}
};

inline std::vector<ThetaNode> theta_table(const KernelParams& p, double theta_min,
                                          int per_decade, bool coarse) {
    if (!(theta_min > 0.0)) throw DomainError("sigma quadrature: theta_min must be > 0");
    std::vector<ThetaNode> table;
    const double hi = 0.5 * std::numbers::pi;
    if (theta_min >= hi) return table;
    const auto edges = log_panels(theta_min, hi, per_decade);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double m = 0.5 * (edges[i] + edges[i + 1]);
        const double half = 0.5 * (edges[i + 1] - edges[i]);
        const int npts = coarse ? 2 : 4;
        const double* xs = coarse ? gl4_x : gl8_x;
        const double* ws = coarse ? gl4_w : gl8_w;
        for (int k = 0; k < npts; ++k) {
            for (int sgn = -1; sgn <= 1; sgn += 2) {
                const double t = m + sgn * half * xs[k];
                const double w =
                    ws[k] * half * b_of_theta(t, p) * std::pow(std::sin(t), p.d - 2);
                table.push_back({std::cos(t), std::sin(t), w});
            }
        }
    }
    return table;
}

// Accumulate wgt * f~(v+a) f~(v+b) into Q over the index box where both
// interpolation stencils stay in bounds.
template <bool Cubic>
inline void sigma_accumulate(std::vector<double>& Q, const std::vector<double>& F,
                             int n, double h, double ax, double ay, double bx,
                             double by, double wgt) {
    const double alx = ax / h, aly = ay / h;
    const double blx = bx / h, bly = by / h;
    const int abx = static_cast<int>(std::floor(alx)), aby = static_cast<int>(std::floor(aly));
    const int bbx = static_cast<int>(std::floor(blx)), bby = static_cast<int>(std::floor(bly));
    const double afx = alx - abx, afy = aly - aby;
    const double bfx = blx - bbx, bfy = bly - bby;

    constexpr int R0 = Cubic ? -1 : 0;  // stencil extent per axis
    constexpr int R1 = Cubic ? 2 : 1;

    const int x0 = std::max(0, std::max(-(abx + R0), -(bbx + R0)));
    const int x1 = std::min(n, std::min(n - (abx + R1), n - (bbx + R1)));
    const int y0 = std::max(0, std::max(-(aby + R0), -(bby + R0)));
    const int y1 = std::min(n, std::min(n - (aby + R1), n - (bby + R1)));
    if (x0 >= x1 || y0 >= y1) return;

    auto weights = [](double t, double* w) {
        if constexpr (Cubic) {
            w[0] = 0.5 * (-t * (1 - t) * (1 - t));
            w[1] = 0.5 * (2 - 5 * t * t + 3 * t * t * t);
            w[2] = 0.5 * (t * (1 + 4 * t - 3 * t * t));
            w[3] = 0.5 * (-t * t * (1 - t));
        } else {
            w[0] = 1.0 - t;
            w[1] = t;
        }
    };
    constexpr int W = Cubic ? 4 : 2;
    double wax[4], way[4], wbx[4], wby[4];
    weights(afx, wax);
    weights(afy, way);
    weights(bfx, wbx);
    weights(bfy, wby);

    for (int iy = y0; iy < y1; ++iy) {
        double* qrow = &Q[static_cast<std::size_t>(iy) * n];
        const double* fa[4];
        const double* fb[4];
        for (int k = 0; k < W; ++k) {
            fa[k] = &F[static_cast<std::size_t>(iy + aby + R0 + k) * n + abx + R0];
            fb[k] = &F[static_cast<std::size_t>(iy + bby + R0 + k) * n + bbx + R0];
        }
        for (int ix = x0; ix < x1; ++ix) {
            double va = 0.0, vb = 0.0;
            for (int ky = 0; ky < W; ++ky) {
                double ra = 0.0, rb = 0.0;
                for (int kx = 0; kx < W; ++kx) {
                    ra += wax[kx] * fa[ky][ix + kx];
                    rb += wbx[kx] * fb[ky][ix + kx];
                }
                va += way[ky] * ra;
                vb += wby[ky] * rb;
            }
            qrow[ix] += wgt * va * vb;
        }
    }
}

}  // namespace detail

// Pointwise oracle: Q(f,f)(v) by lattice sum over v_* and graded quadrature
// in the deviation angle. The error estimate combines an angular-resolution
// comparison, interpolation indicators, and a stride-2 lattice comparison.
template <int D>
Estimate q_sigma_oracle(const GridDistribution<D>& f, const Vec<D>& v,
                        const KernelParams& p, const SigmaOpts& opts = {}) {
    if (p.d != D) throw DomainError("q_sigma_oracle: dimension mismatch");
    const auto table = detail::theta_table(p, opts.theta_min, opts.theta_per_decade,
                                           opts.coarse_theta);
    const auto table_coarse =
        opts.with_error
            ? detail::theta_table(p, opts.theta_min,
                                  std::max(1, opts.theta_per_decade / 2), true)
            : std::vector<detail::ThetaNode>{};
    const double sigma_total = sigma_mass(p, opts.theta_min);

    const double h = f.grid.h();
    const double cell = std::pow(h, D);
    const double f_at_v = f.eval_cube(v);
    const std::size_t n = f.grid.size();

    double acc = 0.0, acc_coarse = 0.0, acc_stride = 0.0;
    double err_interp = 0.0;

    for (std::size_t j = 0; j < n; ++j) {
        const double fstar = f.values[j];
        const Vec<D> vstar = f.grid.node(j);
        const Vec<D> u = vstar - v;
        const double u_abs = norm(u);
        if (u_abs < 0.5 * h) continue;  // net integrand vanishes at u -> 0
        const Vec<D> khat = (-1.0 / u_abs) * u;  // (v - v_*)/|v - v_*|
        const PlaneBasis<D> frame(khat);
        const double wu = std::pow(u_abs, p.gamma) * cell;

        auto gain_for = [&](const std::vector<detail::ThetaNode>& tab,
                            bool with_ind) {
            double gain = 0.0, ind_acc = 0.0;
            for (const auto& nd : tab) {
                if constexpr (D == 2) {
                    for (int sgn = -1; sgn <= 1; sgn += 2) {
                        const Vec<D> sig = nd.cos_t * khat + (sgn * nd.sin_t) * frame.b1;
                        const Vec<D> w = 0.5 * (u + u_abs * sig);
                        const Vec<D> vp = v + w;
                        const Vec<D> vps = v + u - w;
                        if (with_ind) {
                            const auto a = f.eval_cube_with_indicator(vp);
                            const auto b = f.eval_cube_with_indicator(vps);
                            gain += nd.weight * a.first * b.first;
                            ind_acc += nd.weight *
                                       (a.second * b.first + a.first * b.second);
                        } else {
                            gain += nd.weight * f.eval_cube(vp) * f.eval_cube(vps);
                        }
                    }
                } else {
                    for (int ip = 0; ip < opts.phi_count; ++ip) {
                        const double phi =
                            2.0 * std::numbers::pi * (ip + 0.5) / opts.phi_count;
                        const Vec<D> perp = std::cos(phi) * frame.b1 +
                                            std::sin(phi) * frame.b2;
                        const Vec<D> sig = nd.cos_t * khat + nd.sin_t * perp;
                        const Vec<D> w = 0.5 * (u + u_abs * sig);
                        const Vec<D> vp = v + w;
                        const Vec<D> vps = v + u - w;
                        const double aw = 2.0 * std::numbers::pi / opts.phi_count;
                        if (with_ind) {
                            const auto a = f.eval_cube_with_indicator(vp);
                            const auto b = f.eval_cube_with_indicator(vps);
                            gain += nd.weight * aw * a.first * b.first;
                            ind_acc += nd.weight * aw *
                                       (a.second * b.first + a.first * b.second);
                        } else {
                            gain += nd.weight * aw * f.eval_cube(vp) * f.eval_cube(vps);
                        }
                    }
                }
            }
            return std::pair<double, double>{gain, ind_acc};
        };

        const auto [gain, ind] = gain_for(table, opts.with_error);
        const double loss = sigma_total * fstar * f_at_v;
        const double contrib = wu * (gain - loss);
        acc += contrib;
        err_interp += wu * ind;

        if (opts.with_error) {
            const auto [gain_c, ind_c] = gain_for(table_coarse, false);
            acc_coarse += wu * (gain_c - loss);
            // stride-2 lattice: even nodes only, weight 2^D
            bool even = true;
            std::size_t rem = j;
            for (int k = 0; k < D; ++k) {
                if ((rem % static_cast<std::size_t>(f.grid.n_per_axis)) % 2 != 0)
                    even = false;
                rem /= static_cast<std::size_t>(f.grid.n_per_axis);
            }
            if (even) acc_stride += std::pow(2.0, D) * contrib;
        }
    }

    Estimate out{acc, 0.0};
    if (opts.with_error) {
        out.error = std::fabs(acc - acc_coarse) + err_interp +
                    std::fabs(acc - acc_stride) / 3.0;
    }
    return out;
}

// Whole-grid apply of the truncated sigma-representation operator:
// Q(f,f) at every node, organized as shifted-field passes per
// (offset, angle) pair so a step costs O(offsets x angles x overlap).
// Positions outside the grid cube contribute zero (truncated dynamics).
inline std::vector<double> apply_sigma(const GridDistribution<2>& f,
                                       const KernelParams& p, const SigmaOpts& opts,
                                       int configured_threads = 0) {
    if (p.d != 2) throw DomainError("apply_sigma: dimension mismatch");
    const int n = f.grid.n_per_axis;
    const double h = f.grid.h();
    const double cell = h * h;
    const auto table = detail::theta_table(p, opts.theta_min, opts.theta_per_decade,
                                           opts.coarse_theta);
    const double sigma_total = sigma_mass(p, opts.theta_min);
    const std::vector<double>& F = f.values;
    const bool cubic = f.interp == Interp::tricubic;

    const int noff = 2 * n - 1;
    const std::size_t total_off = static_cast<std::size_t>(noff) * noff;
    std::vector<std::vector<double>> partial(kChunks);

    parallel_chunks(
        total_off,
        [&](int chunk, std::size_t lo, std::size_t hi) {
            auto& Q = partial[static_cast<std::size_t>(chunk)];
            if (Q.empty()) Q.assign(static_cast<std::size_t>(n) * n, 0.0);
            for (std::size_t off = lo; off < hi; ++off) {
                const int jx = static_cast<int>(off % noff) - (n - 1);
                const int jy = static_cast<int>(off / noff) - (n - 1);
                if (jx == 0 && jy == 0) continue;
                const double ux = jx * h, uy = jy * h;
                const double u_abs = std::hypot(ux, uy);
                const double wu = std::pow(u_abs, p.gamma) * cell;

                // loss: -sigma_total * wu * f(v) f(v+u) on the overlap box
                {
                    const int x0 = std::max(0, -jx), x1 = std::min(n, n - jx);
                    const int y0 = std::max(0, -jy), y1 = std::min(n, n - jy);
                    const double c = sigma_total * wu;
                    for (int iy = y0; iy < y1; ++iy) {
                        const double* frow = &F[static_cast<std::size_t>(iy) * n];
                        const double* srow =
                            &F[static_cast<std::size_t>(iy + jy) * n + jx];
                        double* qrow = &Q[static_cast<std::size_t>(iy) * n];
                        for (int ix = x0; ix < x1; ++ix)
                            qrow[ix] -= c * frow[ix] * srow[ix];
                    }
                }

                // gain: for each angular node, two shifted interpolated fields
                const double ku = -ux / u_abs, kv = -uy / u_abs;  // khat
                for (const auto& nd : table) {
                    for (int sgn = -1; sgn <= 1; sgn += 2) {
                        // sigma = cos t * khat + sgn sin t * rot90(khat)
                        const double sx = nd.cos_t * ku - sgn * nd.sin_t * kv;
                        const double sy = nd.cos_t * kv + sgn * nd.sin_t * ku;
                        const double ax = 0.5 * (ux + u_abs * sx);
                        const double ay = 0.5 * (uy + u_abs * sy);
                        const double bx = ux - ax, by = uy - ay;
                        const double wgt = nd.weight * wu;
                        if (cubic)
                            detail::sigma_accumulate<true>(Q, F, n, h, ax, ay, bx, by,
                                                          wgt);
                        else
                            detail::sigma_accumulate<false>(Q, F, n, h, ax, ay, bx, by,
                                                           wgt);
                    }
                }
            }
        },
        configured_threads);

    std::vector<double> Q(static_cast<std::size_t>(n) * n, 0.0);
    for (const auto& part : partial) {
        if (part.empty()) continue;
        for (std::size_t i = 0; i < Q.size(); ++i) Q[i] += part[i];
    }
    return Q;
}

}  // namespace kb
