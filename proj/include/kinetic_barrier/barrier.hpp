#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "kinetic_barrier/errors.hpp"
#include "kinetic_barrier/vec.hpp"

namespace kb {

// Comparison functions used by the maximum-principle arguments:
//   g(t,v)      = N(t) min(1, |v|^-q)                      (plain)
//   g~(t,v)     = g + eps(t)                               (const_corrector)
//   g~(t,v)     = g + eps(t) min(1, |v|^-(d+1)+eta)        (power_corrector)
//   g~(t,v)     = g + eps(t) min(1, |v|^-q0)               (q0_corrector)
enum class BarrierForm { plain, const_corrector, power_corrector, q0_corrector };

struct NSchedule {
    enum class Kind { constant, inverse_power, one_plus_inverse_power };
    Kind kind = Kind::constant;
    double N0 = 1.0;
    double beta = 0.0;

    static NSchedule constant(double N0) { return {Kind::constant, N0, 0.0}; }
    static NSchedule inverse_power(double N0, double beta) {
        return {Kind::inverse_power, N0, beta};
    }
    static NSchedule one_plus_inverse_power(double N0, double beta) {
        return {Kind::one_plus_inverse_power, N0, beta};
    }

    bool singular_at_zero() const { return kind != Kind::constant && beta > 0.0; }

    double at(double t) const {
        switch (kind) {
            case Kind::constant: return N0;
            case Kind::inverse_power: return N0 * std::pow(t, -beta);
            case Kind::one_plus_inverse_power: return N0 * (1.0 + std::pow(t, -beta));
        }
        return N0;
    }
    double ddt(double t) const {
        switch (kind) {
            case Kind::constant: return 0.0;
            case Kind::inverse_power: return -beta * N0 * std::pow(t, -beta - 1.0);
            case Kind::one_plus_inverse_power:
                return -beta * N0 * std::pow(t, -beta - 1.0);
        }
        return 0.0;
    }
};

struct EpsSchedule {
    enum class Kind { constant, exponential, inverse_power };
    Kind kind = Kind::constant;
    double eps0 = 0.0;
    double rate = 0.0;  // C_eps for exponential, beta0 for inverse_power

    static EpsSchedule constant(double e0) { return {Kind::constant, e0, 0.0}; }
    static EpsSchedule exponential(double e0, double c) {
        return {Kind::exponential, e0, c};
    }
    static EpsSchedule inverse_power(double e0, double beta0) {
        return {Kind::inverse_power, e0, beta0};
    }

    bool singular_at_zero() const { return kind == Kind::inverse_power && rate > 0.0; }

    double at(double t) const {
        switch (kind) {
            case Kind::constant: return eps0;
            case Kind::exponential: return eps0 * std::exp(rate * t);
            case Kind::inverse_power: return eps0 * std::pow(t, -rate);
        }
        return eps0;
    }
    double ddt(double t) const {
        switch (kind) {
            case Kind::constant: return 0.0;
            case Kind::exponential: return rate * eps0 * std::exp(rate * t);
            case Kind::inverse_power: return -rate * eps0 * std::pow(t, -rate - 1.0);
        }
        return 0.0;
    }
};

struct Barrier {
    BarrierForm form = BarrierForm::plain;
    NSchedule N = NSchedule::constant(1.0);
    double q = 0.0;  // decay exponent, >= 0
    EpsSchedule eps = EpsSchedule::constant(0.0);
    double eta = 0.0;  // power_corrector only, in (0, d+1)
    double q0 = 0.0;   // q0_corrector only
    int d = 2;

    static Barrier plain(double N0, double q) {
        Barrier b;
        b.N = NSchedule::constant(N0);
        b.q = q;
        return b;
    }

    double corrector_exponent() const {
        switch (form) {
            case BarrierForm::plain: return 0.0;
            case BarrierForm::const_corrector: return 0.0;
            case BarrierForm::power_corrector: return d + 1.0 - eta;
            case BarrierForm::q0_corrector: return q0;
        }
        return 0.0;
    }

    void check_time(double t) const {
        if (t < 0.0) throw DomainError("barrier: negative time");
        if (t == 0.0 && (N.singular_at_zero() || eps.singular_at_zero()))
            throw SingularTime("barrier schedule singular at t = 0");
    }

    // min(1, rho^-a)
    static double decay(double rho, double a) {
        if (a <= 0.0) return 1.0;
        return rho <= 1.0 ? 1.0 : std::pow(rho, -a);
    }

    double value(double t, double rho) const {
        check_time(t);
        double g = N.at(t) * decay(rho, q);
        if (form == BarrierForm::const_corrector) g += eps.at(t);
        else if (form != BarrierForm::plain) g += eps.at(t) * decay(rho, corrector_exponent());
        return g;
    }

    double ddt(double t, double rho) const {
        check_time(t);
        double g = N.ddt(t) * decay(rho, q);
        if (form == BarrierForm::const_corrector) g += eps.ddt(t);
        else if (form != BarrierForm::plain) g += eps.ddt(t) * decay(rho, corrector_exponent());
        return g;
    }

    template <int D>
    double value_at(double t, const Vec<D>& v) const {
        return value(t, norm(v));
    }

    // Radial evaluator bound at a fixed time, for use as a second operator
    // argument.
    std::function<double(double)> at_time(double t) const {
        check_time(t);
        return [b = *this, t](double rho) { return b.value(t, rho); };
    }

    // Conversion factor between the min(1,|v|^-q) form used here and the
    // (1+|v|)^-q form: they differ by at most 2^q.
    double equivalence_factor() const { return std::pow(2.0, q); }
};

inline double barrier_value(const Barrier& b, double t, double rho) {
    return b.value(t, rho);
}

template <int D>
double barrier_value(const Barrier& b, double t, const Vec<D>& v) {
    return b.value(t, norm(v));
}

inline std::string to_string(BarrierForm f) {
    switch (f) {
        case BarrierForm::plain: return "plain";
        case BarrierForm::const_corrector: return "const_corrector";
        case BarrierForm::power_corrector: return "power_corrector";
        case BarrierForm::q0_corrector: return "q0_corrector";
    }
    return "?";
}

}  // namespace kb
