#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace kb {

// Small fixed-dimension velocity vector. D is 2 or 3 on all evaluation
// paths; the type itself works for any D >= 1.
template <int D>
struct Vec {
    std::array<double, D> c{};

    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < D; ++i) c[i] += o.c[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < D; ++i) c[i] -= o.c[i];
        return *this;
    }
    Vec& operator*=(double a) {
        for (int i = 0; i < D; ++i) c[i] *= a;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(double a, Vec v) { return v *= a; }
    friend Vec operator*(Vec v, double a) { return v *= a; }
    friend Vec operator-(Vec v) { return v *= -1.0; }
};

template <int D>
inline double dot(const Vec<D>& a, const Vec<D>& b) {
    double s = 0.0;
    for (int i = 0; i < D; ++i) s += a[i] * b[i];
    return s;
}

template <int D>
inline double norm2(const Vec<D>& a) {
    return dot(a, a);
}

template <int D>
inline double norm(const Vec<D>& a) {
    return std::sqrt(norm2(a));
}

template <int D>
inline Vec<D> normalized(const Vec<D>& a) {
    double n = norm(a);
    return (1.0 / n) * a;
}

inline Vec<2> rot90(const Vec<2>& a) { return Vec<2>{{-a[1], a[0]}}; }

// Orthonormal basis of the hyperplane orthogonal to the unit vector e.
// Deterministic: seeded from the smallest component of e.
template <int D>
struct PlaneBasis;

template <>
struct PlaneBasis<2> {
    Vec<2> b1;
    explicit PlaneBasis(const Vec<2>& e) : b1(rot90(e)) {}
};

template <>
struct PlaneBasis<3> {
    Vec<3> b1, b2;
    explicit PlaneBasis(const Vec<3>& e) {
        int k = 0;
        for (int i = 1; i < 3; ++i)
            if (std::fabs(e[i]) < std::fabs(e[k])) k = i;
        Vec<3> axis{};
        axis[k] = 1.0;
        // b1 = normalize(axis - (axis.e)e), b2 = e x b1
        Vec<3> t = axis - dot(axis, e) * e;
        b1 = normalized(t);
        b2 = Vec<3>{{e[1] * b1[2] - e[2] * b1[1], e[2] * b1[0] - e[0] * b1[2],
                     e[0] * b1[1] - e[1] * b1[0]}};
    }
};

// Point in the hyperplane through `base` orthogonal to the frame normal.
inline Vec<2> plane_point(const Vec<2>& base, const PlaneBasis<2>& fr, double t) {
    return base + t * fr.b1;
}

inline Vec<3> plane_point(const Vec<3>& base, const PlaneBasis<3>& fr, double t1,
                          double t2) {
    return base + t1 * fr.b1 + t2 * fr.b2;
}

}  // namespace kb
