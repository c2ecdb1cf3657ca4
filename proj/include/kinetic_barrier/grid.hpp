#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "kinetic_barrier/errors.hpp"
#include "kinetic_barrier/vec.hpp"

namespace kb {

// Uniform cell-centered velocity grid, symmetric about the origin:
// node coordinates per axis are -r_max + (i + 1/2) h with h = 2 r_max / n.
template <int D>
struct VelocityGrid {
    double r_max = 8.0;
    int n_per_axis = 64;

    VelocityGrid() = default;
    VelocityGrid(double rmax, int n) : r_max(rmax), n_per_axis(n) {
        if (n_per_axis < 8) throw OutOfRange("n_per_axis", "must be >= 8");
        if (!(r_max > 0.0)) throw OutOfRange("r_max", "must be positive");
    }

    double h() const { return 2.0 * r_max / n_per_axis; }
    // Radius of the ball covered by interpolation nodes along the axes.
    double support_radius() const { return r_max - 0.5 * h(); }

    std::size_t size() const {
        std::size_t s = 1;
        for (int k = 0; k < D; ++k) s *= static_cast<std::size_t>(n_per_axis);
        return s;
    }

    double axis_coord(int i) const { return -r_max + (i + 0.5) * h(); }

    Vec<D> node(std::size_t linear) const {
        Vec<D> v;
        for (int k = 0; k < D; ++k) {
            v[k] = axis_coord(static_cast<int>(linear % static_cast<std::size_t>(n_per_axis)));
            linear /= static_cast<std::size_t>(n_per_axis);
        }
        return v;
    }

    std::size_t index(const std::array<int, D>& idx) const {
        std::size_t lin = 0;
        for (int k = D - 1; k >= 0; --k)
            lin = lin * static_cast<std::size_t>(n_per_axis) + static_cast<std::size_t>(idx[static_cast<std::size_t>(k)]);
        return lin;
    }

    bool operator==(const VelocityGrid& o) const {
        return r_max == o.r_max && n_per_axis == o.n_per_axis;
    }
};

enum class Interp { multilinear, tricubic };

struct TailModel {
    enum class Kind { zero, power_law };
    Kind kind = Kind::zero;
    double q_tail = 0.0;     // power-law decay exponent beyond the grid
    double amplitude = 1.0;  // scale on the continued boundary value

    static TailModel zero() { return TailModel{}; }
    static TailModel power_law(double q, double amp = 1.0) {
        return TailModel{Kind::power_law, q, amp};
    }
};

// Sampled nonnegative density f(v) with an off-grid evaluation rule.
// Inside |v| <= support_radius values are interpolated; beyond, the tail
// model continues the boundary value along rays, so power-law tails are
// continuous by construction (amplitude 1).
template <int D>
struct GridDistribution {
    VelocityGrid<D> grid;
    std::vector<double> values;
    Interp interp = Interp::multilinear;
    TailModel tail = TailModel::zero();

    GridDistribution() = default;
    GridDistribution(VelocityGrid<D> g, std::vector<double> vals,
                     Interp ip = Interp::multilinear, TailModel tm = TailModel::zero())
        : grid(g), values(std::move(vals)), interp(ip), tail(tm) {
        if (values.size() != grid.size())
            throw OutOfRange("values", "size does not match grid");
        max_val_ = 0.0;
        for (double x : values) max_val_ = std::max(max_val_, x);
    }

    static GridDistribution sample(VelocityGrid<D> g,
                                   const std::function<double(const Vec<D>&)>& f,
                                   Interp ip = Interp::multilinear,
                                   TailModel tm = TailModel::zero()) {
        std::vector<double> vals(g.size());
        for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = f(g.node(i));
        return GridDistribution(g, std::move(vals), ip, tm);
    }

    double operator()(const Vec<D>& v) const { return eval(v); }

    double eval(const Vec<D>& v) const {
        const double rho = norm(v);
        const double rho0 = grid.support_radius();
        if (rho <= rho0) return std::max(0.0, interpolate(v, interp));
        if (tail.kind == TailModel::Kind::zero) return 0.0;
        const Vec<D> bpt = (rho0 / rho) * v;
        const double boundary = std::max(0.0, interpolate(bpt, interp));
        return tail.amplitude * boundary * std::pow(rho0 / rho, tail.q_tail);
    }

    // Value plus a local interpolation-error indicator (difference of the
    // two interpolation rules; zero exactly on the lattice).
    std::pair<double, double> eval_with_indicator(const Vec<D>& v) const {
        const double rho = norm(v);
        const double rho0 = grid.support_radius();
        if (rho <= rho0) {
            const double a = interpolate(v, Interp::multilinear);
            const double b = interpolate(v, Interp::tricubic);
            const double val = std::max(0.0, interp == Interp::tricubic ? b : a);
            return {val, std::fabs(a - b)};
        }
        if (tail.kind == TailModel::Kind::zero) return {0.0, 0.0};
        const Vec<D> bpt = (rho0 / rho) * v;
        const auto [bval, berr] = eval_with_indicator(bpt);
        const double fac = tail.amplitude * std::pow(rho0 / rho, tail.q_tail);
        return {bval * fac, berr * fac};
    }

    double max_value() const { return max_val_; }

    // Raw interpolation over the whole cube (clamped stencils), without the
    // radial support cut. Lattice-based paths (sigma-representation sums)
    // use this together with the tail rule beyond the cube.
    double interpolate_raw(const Vec<D>& v, Interp rule) const {
        return interpolate(v, rule);
    }

    // Evaluation rule for sigma-representation quadrature: interpolate
    // anywhere inside the cube, apply the tail model radially beyond it.
    double eval_cube(const Vec<D>& v) const {
        double linf = 0.0;
        for (int k = 0; k < D; ++k) linf = std::max(linf, std::fabs(v[k]));
        if (linf <= grid.r_max) return std::max(0.0, interpolate(v, interp));
        if (tail.kind == TailModel::Kind::zero) return 0.0;
        const double rho = norm(v);
        const double rho0 = grid.support_radius();
        const Vec<D> bpt = (rho0 / rho) * v;
        const double boundary = std::max(0.0, interpolate(bpt, interp));
        return tail.amplitude * boundary * std::pow(rho0 / rho, tail.q_tail);
    }

    std::pair<double, double> eval_cube_with_indicator(const Vec<D>& v) const {
        double linf = 0.0;
        for (int k = 0; k < D; ++k) linf = std::max(linf, std::fabs(v[k]));
        if (linf <= grid.r_max) {
            const double a = interpolate(v, Interp::multilinear);
            const double b = interpolate(v, Interp::tricubic);
            const double val = std::max(0.0, interp == Interp::tricubic ? b : a);
            return {val, std::fabs(a - b)};
        }
        return {eval_cube(v), 0.0};
    }

   private:
    double max_val_ = 0.0;
    double interpolate(const Vec<D>& v, Interp rule) const {
        const int n = grid.n_per_axis;
        const double h = grid.h();
        std::array<double, D> u;
        for (int k = 0; k < D; ++k) u[static_cast<std::size_t>(k)] = (v[k] + grid.r_max) / h - 0.5;

        if (rule == Interp::multilinear) {
            std::array<int, D> i0;
            std::array<double, D> fr;
            for (int k = 0; k < D; ++k) {
                int i = static_cast<int>(std::floor(u[static_cast<std::size_t>(k)]));
                i = std::clamp(i, 0, n - 2);
                i0[static_cast<std::size_t>(k)] = i;
                fr[static_cast<std::size_t>(k)] = u[static_cast<std::size_t>(k)] - i;
            }
            if constexpr (D == 2) {
                const double fx = fr[0], fy = fr[1];
                const double v00 = at(i0[0], i0[1]), v10 = at(i0[0] + 1, i0[1]);
                const double v01 = at(i0[0], i0[1] + 1), v11 = at(i0[0] + 1, i0[1] + 1);
                return (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10 +
                       (1 - fx) * fy * v01 + fx * fy * v11;
            } else {
                const double fx = fr[0], fy = fr[1], fz = fr[2];
                double s = 0.0;
                for (int dz = 0; dz <= 1; ++dz)
                    for (int dy = 0; dy <= 1; ++dy)
                        for (int dx = 0; dx <= 1; ++dx) {
                            const double w = (dx ? fx : 1 - fx) * (dy ? fy : 1 - fy) *
                                             (dz ? fz : 1 - fz);
                            s += w * at(i0[0] + dx, i0[1] + dy, i0[2] + dz);
                        }
                return s;
            }
        }

        // Cubic convolution (Keys, a = -1/2), separable, edge-clamped.
        std::array<int, D> base;
        std::array<std::array<double, 4>, D> w;
        for (int k = 0; k < D; ++k) {
            int i = static_cast<int>(std::floor(u[static_cast<std::size_t>(k)]));
            i = std::clamp(i, 0, n - 2);
            const double t = u[static_cast<std::size_t>(k)] - i;
            base[static_cast<std::size_t>(k)] = i;
            auto& wk = w[static_cast<std::size_t>(k)];
            wk[0] = 0.5 * (-t * (1 - t) * (1 - t));
            wk[1] = 0.5 * (2 - 5 * t * t + 3 * t * t * t);
            wk[2] = 0.5 * (t * (1 + 4 * t - 3 * t * t));
            wk[3] = 0.5 * (-t * t * (1 - t));
        }
        if constexpr (D == 2) {
            double s = 0.0;
            for (int dy = -1; dy <= 2; ++dy) {
                double row = 0.0;
                for (int dx = -1; dx <= 2; ++dx)
                    row += w[0][static_cast<std::size_t>(dx + 1)] * at(base[0] + dx, base[1] + dy);
                s += w[1][static_cast<std::size_t>(dy + 1)] * row;
            }
            return s;
        } else {
            double s = 0.0;
            for (int dz = -1; dz <= 2; ++dz) {
                double plane = 0.0;
                for (int dy = -1; dy <= 2; ++dy) {
                    double row = 0.0;
                    for (int dx = -1; dx <= 2; ++dx)
                        row += w[0][static_cast<std::size_t>(dx + 1)] *
                               at(base[0] + dx, base[1] + dy, base[2] + dz);
                    plane += w[1][static_cast<std::size_t>(dy + 1)] * row;
                }
                s += w[2][static_cast<std::size_t>(dz + 1)] * plane;
            }
            return s;
        }
    }

    double at(int ix, int iy) const {
        const int n = grid.n_per_axis;
        ix = std::clamp(ix, 0, n - 1);
        iy = std::clamp(iy, 0, n - 1);
        return values[static_cast<std::size_t>(iy) * static_cast<std::size_t>(n) +
                      static_cast<std::size_t>(ix)];
    }
    double at(int ix, int iy, int iz) const {
        const int n = grid.n_per_axis;
        ix = std::clamp(ix, 0, n - 1);
        iy = std::clamp(iy, 0, n - 1);
        iz = std::clamp(iz, 0, n - 1);
        return values[(static_cast<std::size_t>(iz) * static_cast<std::size_t>(n) +
                       static_cast<std::size_t>(iy)) *
                          static_cast<std::size_t>(n) +
                      static_cast<std::size_t>(ix)];
    }
};

}  // namespace kb
