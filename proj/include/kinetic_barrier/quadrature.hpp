#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "kinetic_barrier/errors.hpp"
#include "kinetic_barrier/vec.hpp"

namespace kb {

// Value plus an absolute error estimate. Estimates add up; they are meant to
// be conservative rather than sharp.
struct Estimate {
    double value = 0.0;
    double error = 0.0;

    Estimate& operator+=(const Estimate& o) {
        value += o.value;
        error += o.error;
        return *this;
    }
    friend Estimate operator+(Estimate a, const Estimate& b) { return a += b; }
    friend Estimate operator*(double c, Estimate e) {
        e.value *= c;
        e.error *= std::fabs(c);
        return e;
    }
};

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1].
inline const double gl4_x[2] = {0.3399810435848563, 0.8611363115940526};
inline const double gl4_w[2] = {0.6521451548625461, 0.3478548451374538};

inline const double gl8_x[4] = {0.1834346424956498, 0.5255324099163290,
                                0.7966664774136267, 0.9602898564975363};
inline const double gl8_w[4] = {0.3626837833783620, 0.3137066458778873,
                                0.2223810344533745, 0.1012285362903763};

}  // namespace detail

// Fixed-order Gauss-Legendre on [a, b].
template <class F>
double quad_gl4(const F& f, double a, double b) {
    const double m = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 2; ++i)
        s += detail::gl4_w[i] * (f(m + h * detail::gl4_x[i]) + f(m - h * detail::gl4_x[i]));
    return s * h;
}

template <class F>
double quad_gl8(const F& f, double a, double b) {
    const double m = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 4; ++i)
        s += detail::gl8_w[i] * (f(m + h * detail::gl8_x[i]) + f(m - h * detail::gl8_x[i]));
    return s * h;
}

// GL8 with a GL4/GL8 difference as error indicator.
template <class F>
Estimate quad_gl8_est(const F& f, double a, double b) {
    const double c = quad_gl4(f, a, b);
    const double fine = quad_gl8(f, a, b);
    return Estimate{fine, std::fabs(fine - c)};
}

// Same for integrands that carry their own pointwise error indicator
// (returned as Estimate). The panel error is the GL4/GL8 difference plus
// the integrated indicator.
template <class F>
Estimate quad_gl8_est2(const F& f, double a, double b) {
    const double m = 0.5 * (a + b), h = 0.5 * (b - a);
    Estimate fine;
    for (int i = 0; i < 4; ++i) {
        const double dx = h * detail::gl8_x[i];
        const Estimate e1 = f(m + dx), e2 = f(m - dx);
        fine.value += detail::gl8_w[i] * (e1.value + e2.value);
        fine.error += detail::gl8_w[i] * (e1.error + e2.error);
    }
    double coarse = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double dx = h * detail::gl4_x[i];
        coarse += detail::gl4_w[i] * (f(m + dx).value + f(m - dx).value);
    }
    fine.value *= h;
    fine.error *= h;
    coarse *= h;
    return Estimate{fine.value, fine.error + std::fabs(fine.value - coarse)};
}

// Adaptive Gauss-Kronrod 7/15 bisection, in the style of the classic
// embedded rules. Throws QuadratureNonConvergence when the interval budget
// is exhausted before reaching the tolerance.
template <class F>
Estimate quad_adaptive(const F& f, double a, double b, double rel_tol = 1e-10,
                       double abs_tol = 1e-300, int max_intervals = 4000) {
    static const double nw[8][3] = {
        {0.000000000000000, 0.417959183673469, 0.209482141084728},
        {0.405845151377397, 0.381830050505119, 0.190350578064785},
        {0.741531185599394, 0.279705391489277, 0.140653259715525},
        {0.949107912342759, 0.129484966168870, 0.063092092629979},
        {0.207784955007898, 0.0, 0.204432940075298},
        {0.586087235467691, 0.0, 0.169004726639267},
        {0.864864423359769, 0.0, 0.104790010322250},
        {0.991455371120813, 0.0, 0.022935322010529}};

    auto gk = [&](double lo, double hi, double& err) {
        const double x0 = 0.5 * (lo + hi), m = hi - x0;
        const double y0 = f(x0);
        double g7 = nw[0][1] * y0, k15 = nw[0][2] * y0;
        for (int i = 1; i < 8; ++i) {
            const double dx = m * nw[i][0];
            const double yi = f(x0 + dx) + f(x0 - dx);
            g7 += nw[i][1] * yi;
            k15 += nw[i][2] * yi;
        }
        g7 *= m;
        k15 *= m;
        err = std::pow(200.0 * std::fabs(g7 - k15), 1.5);
        return k15;
    };

    struct Iv {
        double a, b, val, err;
    };
    std::vector<Iv> stack;
    double err0;
    double v0 = gk(a, b, err0);
    stack.push_back({a, b, v0, err0});

    double total_val = v0, total_err = err0;
    int used = 1;
    while (total_err > rel_tol * std::fabs(total_val) + abs_tol) {
        // split the worst interval
        std::size_t worst = 0;
        for (std::size_t i = 1; i < stack.size(); ++i)
            if (stack[i].err > stack[worst].err) worst = i;
        if (used + 2 > max_intervals)
            throw QuadratureNonConvergence("quad_adaptive: interval budget exhausted");
        Iv iv = stack[worst];
        stack.erase(stack.begin() + static_cast<std::ptrdiff_t>(worst));
        const double mid = 0.5 * (iv.a + iv.b);
        double e1, e2;
        const double v1 = gk(iv.a, mid, e1);
        const double v2 = gk(mid, iv.b, e2);
        stack.push_back({iv.a, mid, v1, e1});
        stack.push_back({mid, iv.b, v2, e2});
        used += 2;
        total_val = 0.0;
        total_err = 0.0;
        for (const auto& s : stack) {
            total_val += s.val;
            total_err += s.err;
        }
        if (iv.b - iv.a < 1e-15 * (b - a)) break;  // cannot refine further
    }
    return Estimate{total_val, total_err};
}

// Geometrically graded panel edges on [a, b], a > 0, with roughly
// `per_decade` panels per decade. Always includes both endpoints.
inline std::vector<double> log_panels(double a, double b, int per_decade) {
    std::vector<double> edges;
    if (!(b > a) || !(a > 0.0)) {
        edges = {a, b};
        return edges;
    }
    const double decades = std::log10(b / a);
    int n = std::max(1, static_cast<int>(std::ceil(decades * per_decade)));
    edges.reserve(static_cast<std::size_t>(n) + 1);
    const double ratio = std::pow(b / a, 1.0 / n);
    double x = a;
    edges.push_back(a);
    for (int i = 1; i < n; ++i) {
        x *= ratio;
        edges.push_back(x);
    }
    edges.push_back(b);
    return edges;
}

// Integrate f over [a, b] with log-graded GL8 panels; error from GL4 diffs.
template <class F>
Estimate quad_log_panels(const F& f, double a, double b, int per_decade) {
    Estimate total;
    const auto edges = log_panels(a, b, per_decade);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        total += quad_gl8_est(f, edges[i], edges[i + 1]);
    return total;
}

// Log-graded edges refined inside the given windows (where the integrand has
// localized structure, e.g. a ray crossing the sampled support): each window
// is subdivided linearly down to roughly `fine_width` panels.
inline std::vector<double> refined_log_panels(
    double a, double b, int per_decade,
    const std::vector<std::pair<double, double>>& windows, double fine_width) {
    std::vector<double> edges = log_panels(a, b, per_decade);
    for (const auto& wnd : windows) {
        const double lo = std::max(a, wnd.first);
        const double hi = std::min(b, wnd.second);
        if (!(hi > lo)) continue;
        int n = std::max(2, static_cast<int>(std::ceil((hi - lo) / fine_width)));
        n = std::min(n, 48);
        for (int i = 0; i <= n; ++i)
            edges.push_back(lo + (hi - lo) * i / n);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [&](double x, double y) {
                                return std::fabs(y - x) < 1e-12 * (b - a);
                            }),
                edges.end());
    return edges;
}

// Parameter window where |base + t e| <= R along t in [0, inf); empty if the
// ray misses the ball.
template <int D>
std::pair<double, double> ray_ball_window(const Vec<D>& base, const Vec<D>& e,
                                          double R) {
    const double be = dot(base, e);
    const double disc = be * be - (norm2(base) - R * R);
    if (disc <= 0.0) return {0.0, -1.0};
    const double sq = std::sqrt(disc);
    return {-be - sq, -be + sq};
}

// Antipodally symmetric quasi-uniform direction sets. The first half lists
// one member of each +/- pair; entry i + n/2 is the antipode of entry i.
inline std::vector<Vec<2>> direction_set_2d(int n) {
    if (n % 2) ++n;
    std::vector<Vec<2>> dirs(static_cast<std::size_t>(n));
    const int half = n / 2;
    for (int i = 0; i < half; ++i) {
        // offset avoids axis alignment so antipodal pairing stays exact
        const double phi = std::numbers::pi * (i + 0.5) / half;
        dirs[static_cast<std::size_t>(i)] = Vec<2>{{std::cos(phi), std::sin(phi)}};
        dirs[static_cast<std::size_t>(i + half)] = -dirs[static_cast<std::size_t>(i)];
    }
    return dirs;
}

// Fibonacci hemisphere, antipodally completed.
inline std::vector<Vec<3>> direction_set_3d(int n) {
    if (n % 2) ++n;
    const int half = n / 2;
    std::vector<Vec<3>> dirs(static_cast<std::size_t>(n));
    const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < half; ++i) {
        const double z = (i + 0.5) / half;  // upper hemisphere
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = ga * i;
        dirs[static_cast<std::size_t>(i)] =
            Vec<3>{{r * std::cos(phi), r * std::sin(phi), z}};
        dirs[static_cast<std::size_t>(i + half)] = -dirs[static_cast<std::size_t>(i)];
    }
    return dirs;
}

template <int D>
std::vector<Vec<D>> direction_set(int n);

template <>
inline std::vector<Vec<2>> direction_set<2>(int n) {
    return direction_set_2d(n);
}

template <>
inline std::vector<Vec<3>> direction_set<3>(int n) {
    return direction_set_3d(n);
}

}  // namespace kb
