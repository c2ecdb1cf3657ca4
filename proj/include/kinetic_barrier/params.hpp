#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "kinetic_barrier/errors.hpp"

namespace kb {

// Physics configuration of the collision kernel
//   B(r, cos t) = r^gamma * b(cos t),
//   b(cos t)    = (sin t/2)^{-(d-2)+gamma} (tan t/2)^{-(gamma+2s+1)} btilde(cos t)
// with 0 < btilde_lo <= btilde <= btilde_hi. btilde defaults to the constant 1.
struct KernelParams {
    int d = 2;
    double gamma = 0.0;
    double s = 0.5;
    double btilde_lo = 1.0;
    double btilde_hi = 1.0;
    std::function<double(double)> btilde;  // argument: cos theta; empty means 1

    double btilde_at(double cos_theta) const {
        return btilde ? btilde(cos_theta) : 1.0;
    }
    bool moderately_soft() const { return gamma + 2.0 * s >= 0.0 && gamma + 2.0 * s <= 2.0; }
};

enum class Regime { hard, maxwellian, moderately_soft, very_soft };

inline std::string to_string(Regime r) {
    switch (r) {
        case Regime::hard: return "hard";
        case Regime::maxwellian: return "maxwellian";
        case Regime::moderately_soft: return "moderately_soft";
        case Regime::very_soft: return "very_soft";
    }
    return "?";
}

struct ValidatedParams {
    KernelParams params;
    Regime regime;
};

inline ValidatedParams validate_params(const KernelParams& p) {
    if (p.d < 2) throw OutOfRange("d", "dimension must be >= 2");
    if (p.d > 3) throw OutOfRange("d", "quadrature implemented for d in {2,3}");
    if (!(p.gamma > -static_cast<double>(p.d) && p.gamma <= 2.0))
        throw OutOfRange("gamma", "gamma must lie in (-d, 2]");
    if (!(p.s > 0.0 && p.s < 1.0)) throw OutOfRange("s", "s must lie in (0, 1)");
    if (!(p.btilde_lo > 0.0)) throw OutOfRange("btilde_lo", "must be positive");
    if (!(p.btilde_hi >= p.btilde_lo)) throw OutOfRange("btilde_hi", "must be >= btilde_lo");

    Regime r;
    if (p.gamma > 0.0)
        r = Regime::hard;
    else if (p.gamma == 0.0)
        r = Regime::maxwellian;
    else if (p.gamma + 2.0 * p.s >= 0.0)
        r = Regime::moderately_soft;
    else
        r = Regime::very_soft;
    return ValidatedParams{p, r};
}

// Radii constants of the good/bad decomposition. c1 bounds the "good" ball
// |v'_*| <= c1(q)|v|; c2 enters the inner-integral estimate; c3 splits the
// bad v'-domain. c1(0) = +inf: the whole space is "good" for a constant
// barrier, matching the q = 0 maximum-principle argument.
struct SplittingConstants {
    double c1, c2, c3;
};

inline double splitting_c1(double q) {
    if (q <= 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (20.0 * q);
}

inline double splitting_c2(double q) { return 1.0 / (20.0 * std::sqrt(1.0 + q)); }

inline double splitting_c3(double q) { return 0.5 / (1.0 + q); }

inline SplittingConstants splitting_constants(double q) {
    if (!(q >= 1.0)) throw DomainError("splitting_constants requires q >= 1");
    return SplittingConstants{splitting_c1(q), splitting_c2(q), splitting_c3(q)};
}

// Surface measure of the unit sphere S^{n-1} in R^n; |S^0| = 2 by the
// counting-measure convention used in the cancellation constant.
inline double sphere_measure(int n_minus_1) {
    const int n = n_minus_1 + 1;
    if (n == 1) return 2.0;
    if (n == 2) return 2.0 * std::numbers::pi;
    if (n == 3) return 4.0 * std::numbers::pi;
    // Gamma-function formula for completeness.
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

}  // namespace kb
