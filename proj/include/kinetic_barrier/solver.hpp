#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "kinetic_barrier/errors.hpp"
#include "kinetic_barrier/grid.hpp"
#include "kinetic_barrier/parallel.hpp"
#include "kinetic_barrier/params.hpp"
#include "kinetic_barrier/sigma.hpp"
#include "kinetic_barrier/vec.hpp"

namespace kb {

enum class Stepper { explicit_euler, rk2 };

template <int D>
struct SolverConfig {
    KernelParams params;
    VelocityGrid<D> grid;
    double dt = 0.0;  // 0: derived from the stability bound
    double t_end = 1.0;
    double stability_factor = 0.2;
    Stepper stepper = Stepper::explicit_euler;
    bool clip_negative = true;
    // Discrete conservation fix: project the update onto the kernel of the
    // collision invariants (mass, momentum, energy) weighted by f.
    bool conserve_projection = true;
    SigmaOpts sigma{0.3, 4, true, 8, false};
    std::vector<double> moment_qs = {0.0, D + 1.0};
    std::vector<double> snapshot_times;
    int threads = 0;
};

template <int D>
struct MomentTrace {
    std::vector<double> times;
    std::vector<double> qs;  // weights of the recorded pointwise moments
    std::vector<std::vector<double>> sup_weighted;  // [qi][step]
    std::vector<std::vector<double>> l1_weighted;   // [qi][step]
    std::vector<double> mass, energy, entropy;
    std::vector<double> clipped_mass;  // cumulative
};

template <int D>
struct Trajectory {
    std::vector<double> times;
    std::vector<GridDistribution<D>> snapshots;
    double initial_mass = 0.0;
    double cumulative_clipped = 0.0;
    // false when the clipping defect exceeded the verification budget
    bool usable_for_verification = true;
};

// sup over nodes of the largest per-node collision frequency
//   nu(v) = sigma_mass(theta_min) * sum_j f_j |v - v_j|^gamma h^d.
template <int D>
double collision_frequency_estimate(const GridDistribution<D>& f,
                                    const KernelParams& p, double theta_min,
                                    int threads = 0) {
    const double angular = sigma_mass(p, theta_min);
    const double cell = std::pow(f.grid.h(), D);
    const std::size_t n = f.grid.size();
    std::vector<double> chunk_max(kChunks, 0.0);
    parallel_chunks(
        n,
        [&](int chunk, std::size_t lo, std::size_t hi) {
            double local = 0.0;
            for (std::size_t i = lo; i < hi; ++i) {
                const Vec<D> v = f.grid.node(i);
                double acc = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (f.values[j] == 0.0) continue;
                    const double r = norm(v - f.grid.node(j));
                    if (r < 1e-12) continue;
                    acc += f.values[j] * std::pow(r, p.gamma);
                }
                local = std::max(local, acc * cell);
            }
            chunk_max[static_cast<std::size_t>(chunk)] = local;
        },
        threads);
    double m = 0.0;
    for (double c : chunk_max) m = std::max(m, c);
    return angular * m;
}

template <int D>
double dt_stability(const GridDistribution<D>& f, const SolverConfig<D>& cfg) {
    const double nu =
        collision_frequency_estimate(f, cfg.params, cfg.sigma.theta_min, cfg.threads);
    if (!(nu > 0.0)) return cfg.t_end;
    return cfg.stability_factor / nu;
}

namespace detail {

// Remove the components of Q along the collision invariants, weighted by f:
// Q~ = Q - (a + b.v + c|v|^2) f with moments of Q~ against {1, v, |v|^2}
// all zero. Gram system is (D+2) x (D+2).
template <int D>
void conserve_project(std::vector<double>& Q, const std::vector<double>& F,
                      const VelocityGrid<D>& grid) {
    constexpr int M = D + 2;
    double G[M][M] = {};
    double r[M] = {};
    const std::size_t n = grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec<D> v = grid.node(i);
        double phi[M];
        phi[0] = 1.0;
        for (int k = 0; k < D; ++k) phi[1 + k] = v[k];
        phi[M - 1] = norm2(v);
        for (int a = 0; a < M; ++a) {
            r[a] += Q[i] * phi[a];
            for (int b = 0; b < M; ++b) G[a][b] += F[i] * phi[a] * phi[b];
        }
    }
    // Gaussian elimination with partial pivoting
    double A[M][M + 1];
    for (int a = 0; a < M; ++a) {
        for (int b = 0; b < M; ++b) A[a][b] = G[a][b];
        A[a][M] = r[a];
    }
    for (int col = 0; col < M; ++col) {
        int piv = col;
        for (int row = col + 1; row < M; ++row)
            if (std::fabs(A[row][col]) > std::fabs(A[piv][col])) piv = row;
        if (std::fabs(A[piv][col]) < 1e-300) return;  // degenerate f: skip fix
        if (piv != col)
            for (int b = 0; b <= M; ++b) std::swap(A[piv][b], A[col][b]);
        for (int row = 0; row < M; ++row) {
            if (row == col) continue;
            const double fac = A[row][col] / A[col][col];
            for (int b = col; b <= M; ++b) A[row][b] -= fac * A[col][b];
        }
    }
    double coef[M];
    for (int a = 0; a < M; ++a) coef[a] = A[a][M] / A[a][a];
    for (std::size_t i = 0; i < n; ++i) {
        if (F[i] == 0.0) continue;
        const Vec<D> v = grid.node(i);
        double corr = coef[0];
        for (int k = 0; k < D; ++k) corr += coef[1 + k] * v[k];
        corr += coef[M - 1] * norm2(v);
        Q[i] -= corr * F[i];
    }
}

template <int D>
std::vector<double> collision_rhs(const GridDistribution<D>& f,
                                  const SolverConfig<D>& cfg) {
    std::vector<double> Q;
    if constexpr (D == 2) {
        Q = apply_sigma(f, cfg.params, cfg.sigma, cfg.threads);
    } else {
        // direct per-node oracle; intended for small 3-d grids
        SigmaOpts o = cfg.sigma;
        o.with_error = false;
        const std::size_t n = f.grid.size();
        Q.assign(n, 0.0);
        parallel_chunks(
            n,
            [&](int, std::size_t lo, std::size_t hi) {
                for (std::size_t i = lo; i < hi; ++i)
                    Q[i] = q_sigma_oracle(f, f.grid.node(i), cfg.params, o).value;
            },
            cfg.threads);
    }
    if (cfg.conserve_projection) conserve_project<D>(Q, f.values, f.grid);
    return Q;
}

inline void check_finite(const std::vector<double>& vals) {
    for (double x : vals)
        if (!std::isfinite(x) || std::fabs(x) > 1e12)
            throw BlowUp("solver: value exceeded 1e12 or became non-finite");
}

}  // namespace detail

// One explicit step f -> f + dt Q(f,f) (or the Heun two-stage variant).
// Returns the clipped mass when negative values were zeroed.
template <int D>
GridDistribution<D> step(const GridDistribution<D>& f, const SolverConfig<D>& cfg,
                         double dt, double* clipped_mass = nullptr) {
    const std::size_t n = f.grid.size();
    std::vector<double> next(n);
    const auto k1 = detail::collision_rhs(f, cfg);
    if (cfg.stepper == Stepper::explicit_euler) {
        for (std::size_t i = 0; i < n; ++i) next[i] = f.values[i] + dt * k1[i];
    } else {
        std::vector<double> mid(n);
        for (std::size_t i = 0; i < n; ++i) mid[i] = f.values[i] + dt * k1[i];
        for (double& x : mid) x = std::max(x, 0.0);
        GridDistribution<D> fmid(f.grid, std::move(mid), f.interp, f.tail);
        const auto k2 = detail::collision_rhs(fmid, cfg);
        for (std::size_t i = 0; i < n; ++i)
            next[i] = f.values[i] + 0.5 * dt * (k1[i] + k2[i]);
    }
    detail::check_finite(next);

    double clipped = 0.0;
    if (cfg.clip_negative) {
        const double cell = std::pow(f.grid.h(), D);
        for (double& x : next)
            if (x < 0.0) {
                clipped -= x * cell;
                x = 0.0;
            }
    }
    if (clipped_mass) *clipped_mass = clipped;
    return GridDistribution<D>(f.grid, std::move(next), f.interp, f.tail);
}

template <int D>
struct SimulationResult {
    MomentTrace<D> trace;
    Trajectory<D> trajectory;
    double dt_used = 0.0;
};

template <int D>
SimulationResult<D> simulate(const SolverConfig<D>& cfg, const GridDistribution<D>& f0) {
    SimulationResult<D> out;
    double dt = cfg.dt;
    const double dt_max = dt_stability(f0, cfg);
    if (dt <= 0.0) dt = dt_max;
    if (dt > dt_max * 1.0000001)
        throw OutOfRange("dt", "exceeds the collision-frequency stability bound");
    out.dt_used = dt;

    const double cell = std::pow(f0.grid.h(), D);
    auto record = [&](const GridDistribution<D>& f, double t, double clipped_total,
                      MomentTrace<D>& tr) {
        tr.times.push_back(t);
        double M = 0.0, E = 0.0, H = 0.0;
        for (std::size_t i = 0; i < f.grid.size(); ++i) {
            const double fi = f.values[i];
            const Vec<D> v = f.grid.node(i);
            M += fi;
            E += fi * norm2(v);
            if (fi > 0.0) H += fi * std::log(fi);
        }
        tr.mass.push_back(M * cell);
        tr.energy.push_back(E * cell);
        tr.entropy.push_back(H * cell);
        tr.clipped_mass.push_back(clipped_total);
        for (std::size_t qi = 0; qi < tr.qs.size(); ++qi) {
            double sup = 0.0, l1 = 0.0;
            for (std::size_t i = 0; i < f.grid.size(); ++i) {
                const double wgt = std::pow(1.0 + norm(f.grid.node(i)), tr.qs[qi]);
                sup = std::max(sup, f.values[i] * wgt);
                l1 += f.values[i] * wgt;
            }
            tr.sup_weighted[qi].push_back(sup);
            tr.l1_weighted[qi].push_back(l1 * cell);
        }
    };

    out.trace.qs = cfg.moment_qs;
    out.trace.sup_weighted.assign(cfg.moment_qs.size(), {});
    out.trace.l1_weighted.assign(cfg.moment_qs.size(), {});

    GridDistribution<D> f = f0;
    double t = 0.0, clipped_total = 0.0;
    out.trajectory.initial_mass = 0.0;
    for (double x : f0.values) out.trajectory.initial_mass += x;
    out.trajectory.initial_mass *= cell;

    auto want_snapshot = [&](double time) {
        for (double ts : cfg.snapshot_times)
            if (std::fabs(ts - time) <= 0.5 * dt) return true;
        return false;
    };

    record(f, t, clipped_total, out.trace);
    if (cfg.snapshot_times.empty() || want_snapshot(0.0)) {
        out.trajectory.times.push_back(0.0);
        out.trajectory.snapshots.push_back(f);
    }

    const int n_steps = static_cast<int>(std::ceil(cfg.t_end / dt - 1e-12));
    for (int k = 0; k < n_steps; ++k) {
        double clipped = 0.0;
        f = step(f, cfg, dt, &clipped);
        clipped_total += clipped;
        t = (k + 1) * dt;
        record(f, t, clipped_total, out.trace);
        if (cfg.snapshot_times.empty() || want_snapshot(t)) {
            out.trajectory.times.push_back(t);
            out.trajectory.snapshots.push_back(f);
        }
    }
    out.trajectory.cumulative_clipped = clipped_total;
    out.trajectory.usable_for_verification =
        clipped_total <= 1e-3 * out.trajectory.initial_mass;
    return out;
}

// Snapshot file: '#' header with the grid geometry and time, then one line
// per node: index, velocity components, value.
template <int D>
void write_snapshot(const std::string& path, const GridDistribution<D>& f, double t) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write snapshot: " + path);
    char buf[256];
    std::snprintf(buf, sizeof buf, "# d=%d r_max=%.17g n_per_axis=%d t=%.17g\n", D,
                  f.grid.r_max, f.grid.n_per_axis, t);
    os << buf;
    for (std::size_t i = 0; i < f.grid.size(); ++i) {
        const Vec<D> v = f.grid.node(i);
        os << i;
        for (int k = 0; k < D; ++k) {
            std::snprintf(buf, sizeof buf, ",%.17g", v[k]);
            os << buf;
        }
        std::snprintf(buf, sizeof buf, ",%.17g\n", f.values[i]);
        os << buf;
    }
}

}  // namespace kb
