#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "kinetic_barrier/errors.hpp"
#include "kinetic_barrier/params.hpp"
#include "kinetic_barrier/quadrature.hpp"

namespace kb {

// Angular collision kernel
//   b(cos t) = (sin t/2)^{gamma-(d-2)} (tan t/2)^{-(gamma+2s+1)} btilde(cos t).
// The product form is evaluated from the half angle for accuracy near the
// grazing singularity t = 0. Operators restrict the deviation angle to
// (0, pi/2]; the formula itself is valid on (0, pi).
inline double b_of_theta(double theta, const KernelParams& p) {
    if (theta <= 0.0 || theta >= std::numbers::pi)
        throw SingularAngle("b_of_theta: theta outside (0, pi)");
    const double sh = std::sin(0.5 * theta);
    const double th = std::tan(0.5 * theta);
    const double e_sin = p.gamma - (p.d - 2);
    const double e_tan = -(p.gamma + 2.0 * p.s + 1.0);
    return std::pow(sh, e_sin) * std::pow(th, e_tan) * p.btilde_at(std::cos(theta));
}

// Variant keyed on cos(theta) per the operator contracts. At the grazing
// singularity cos t = 1 either throws or returns +inf per `throw_on_singular`.
inline double b_angular(double cos_theta, const KernelParams& p,
                        bool throw_on_singular = true) {
    if (!(cos_theta > -1.0 && cos_theta < 1.0)) {
        if (cos_theta >= 1.0) {
            if (throw_on_singular) throw SingularAngle("b_angular: theta = 0");
            return std::numeric_limits<double>::infinity();
        }
        throw SingularAngle("b_angular: theta = pi");
    }
    const double sh = std::sqrt(0.5 * (1.0 - cos_theta));
    const double th = std::sqrt((1.0 - cos_theta) / (1.0 + cos_theta));
    const double e_sin = p.gamma - (p.d - 2);
    const double e_tan = -(p.gamma + 2.0 * p.s + 1.0);
    return std::pow(sh, e_sin) * std::pow(th, e_tan) * p.btilde_at(cos_theta);
}

// Angular mass of the truncated kernel over the sphere:
//   |S^{d-2}| Int_{theta_min}^{pi/2} b(cos t) (sin t)^{d-2} dt.
// Finite only for theta_min > 0.
inline double sigma_mass(const KernelParams& p, double theta_min) {
    if (!(theta_min > 0.0)) throw DomainError("sigma_mass: theta_min must be > 0");
    if (theta_min >= 0.5 * std::numbers::pi) return 0.0;
    auto integrand = [&](double t) {
        return b_of_theta(t, p) * std::pow(std::sin(t), p.d - 2);
    };
    const Estimate e =
        quad_log_panels(integrand, theta_min, 0.5 * std::numbers::pi, 8);
    return sphere_measure(p.d - 2) * e.value;
}

// Cancellation-lemma constant
//   C_S = |S^{d-2}| Int_{theta_min}^{pi/2} (sin t)^{d-2}
//             [ (cos t/2)^{-d-gamma} - 1 ] b(cos t) dt.
// The integrand behaves like c0 t^{1-2s} at t -> 0; the leading power is
// integrated in closed form and the smooth remainder on graded panels.
struct CancellationConstant {
    double value = 0.0;
    double quadrature_error = 0.0;
};

inline CancellationConstant cancellation_constant(const KernelParams& p,
                                                  double theta_min = 0.0,
                                                  double rel_target = 1e-8) {
    const double pi_half = 0.5 * std::numbers::pi;
    if (theta_min >= pi_half) return {0.0, 0.0};
    if (theta_min < 0.0) theta_min = 0.0;

    auto integrand = [&](double t) {
        const double ch = std::cos(0.5 * t);
        const double bracket = std::pow(ch, -(p.d + p.gamma)) - 1.0;
        return std::pow(std::sin(t), p.d - 2) * bracket * b_of_theta(t, p);
    };

    const double A = std::min(0.2, pi_half);
    Estimate total;

    if (theta_min < A) {
        // leading-power coefficient: (d+gamma)/8 * 2^{(d-1)+2s} * btilde(1)
        const double c0 = (p.d + p.gamma) / 8.0 *
                          std::pow(2.0, (p.d - 1) + 2.0 * p.s) * p.btilde_at(1.0);
        const double expo = 2.0 - 2.0 * p.s;
        total.value += c0 * (std::pow(A, expo) - std::pow(theta_min, expo)) / expo;

        auto sub = [&](double t) { return integrand(t) - c0 * std::pow(t, 1.0 - 2.0 * p.s); };
        // Below ~5e-4 A the subtraction cancels catastrophically in double
        // precision; the neglected O(t^{3-2s}) piece is bounded instead.
        const double lo = std::max(theta_min, A * 5e-4);
        total += quad_log_panels(sub, lo, A, 6);
        if (theta_min < lo) {
            total.error += std::fabs(sub(lo)) * lo;
        }
        total += quad_adaptive(integrand, A, pi_half, 0.1 * rel_target);
    } else {
        total += quad_adaptive(integrand, theta_min, pi_half, 0.1 * rel_target);
    }

    const double sd2 = sphere_measure(p.d - 2);
    CancellationConstant out{sd2 * total.value, sd2 * total.error};
    if (out.quadrature_error > rel_target * std::fabs(out.value) + 1e-300)
        throw QuadratureNonConvergence("cancellation_constant: error target not met");
    return out;
}

}  // namespace kb
