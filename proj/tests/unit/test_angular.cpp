#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "kinetic_barrier/angular.hpp"

using namespace kb;

namespace {
KernelParams params(int d, double gamma, double s) {
    KernelParams p;
    p.d = d;
    p.gamma = gamma;
    p.s = s;
    return p;
}
}  // namespace

TEST_CASE("b_angular closed-form spot checks") {
    // theta = pi/2, d=3, gamma=0, s=0.25: (sin pi/4)^-1 (tan pi/4)^-1.5 = sqrt(2)
    const auto p3 = params(3, 0.0, 0.25);
    CHECK(b_angular(std::cos(0.5 * std::numbers::pi), p3) ==
          Catch::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(b_of_theta(0.5 * std::numbers::pi, p3) ==
          Catch::Approx(std::sqrt(2.0)).epsilon(1e-12));

    // theta = pi/3, d=2, gamma=0.5, s=0.3; reference from an independent
    // 30-digit evaluation of the closed form.
    const auto p2 = params(2, 0.5, 0.3);
    CHECK(b_of_theta(std::numbers::pi / 3.0, p2) ==
          Catch::Approx(2.24110559393183657).epsilon(1e-13));
}

TEST_CASE("grazing singularity has the (d-1)+2s order") {
    const auto p = params(3, 0.0, 0.25);
    // b * theta^{(d-1)+2s} approaches 2^{(d-1)+2s} btilde(1) within bounds
    const double order = (p.d - 1) + 2.0 * p.s;
    const double k_limit = std::pow(2.0, order);
    for (double theta : {1e-2, 1e-3, 1e-4}) {
        const double prod = b_of_theta(theta, p) * std::pow(theta, order);
        CHECK(prod > 0.95 * k_limit * p.btilde_lo);
        CHECK(prod < 1.05 * k_limit * p.btilde_hi);
    }
}

TEST_CASE("b_angular rejects or flags the singular endpoints") {
    const auto p = params(2, 0.5, 0.3);
    CHECK_THROWS_AS(b_angular(1.0, p), SingularAngle);
    CHECK(std::isinf(b_angular(1.0, p, false)));
    CHECK_THROWS_AS(b_of_theta(0.0, p), SingularAngle);
}

TEST_CASE("cancellation constant: frozen references") {
    // Independent 30-digit adaptive-quadrature references.
    const auto c3 = cancellation_constant(params(3, 0.0, 0.25));
    CHECK(c3.value == Catch::Approx(17.2167618863971734).epsilon(2e-8));
    CHECK(c3.quadrature_error <= 1e-8 * c3.value);

    const auto c2 = cancellation_constant(params(2, 0.5, 0.3));
    CHECK(c2.value == Catch::Approx(2.56204837266399352).epsilon(2e-8));

    // strong angular singularity still converges
    const auto cs_soft = cancellation_constant(params(2, -0.5, 0.8));
    CHECK(cs_soft.value == Catch::Approx(6.74583258858915269).epsilon(2e-8));

    // truncated variant used for matched-oracle comparisons
    const auto ct = cancellation_constant(params(2, 0.5, 0.3), 0.1);
    CHECK(ct.value == Catch::Approx(2.50817133310588439).epsilon(2e-8));
}

TEST_CASE("cancellation constant is positive for valid params") {
    for (const auto& p : {params(2, 0.5, 0.3), params(2, -0.5, 0.8),
                          params(3, 1.0, 0.2), params(3, -1.0, 0.6)}) {
        CHECK(cancellation_constant(p).value > 0.0);
    }
}

TEST_CASE("cancellation integrand bracket is nonnegative for gamma >= 0") {
    const auto p = params(3, 1.0, 0.2);
    for (double theta = 0.05; theta < 1.57; theta += 0.05) {
        const double bracket = std::pow(std::cos(0.5 * theta), -(p.d + p.gamma)) - 1.0;
        CHECK(bracket >= 0.0);
    }
}

TEST_CASE("sigma mass decreases with the truncation and respects btilde") {
    const auto p = params(2, 0.5, 0.3);
    const double m1 = sigma_mass(p, 0.1);
    const double m2 = sigma_mass(p, 0.3);
    CHECK(m1 > m2);
    CHECK(m2 > 0.0);
    CHECK_THROWS_AS(sigma_mass(p, 0.0), DomainError);

    KernelParams scaled = p;
    scaled.btilde = [](double) { return 2.0; };
    scaled.btilde_lo = scaled.btilde_hi = 2.0;
    CHECK(sigma_mass(scaled, 0.1) == Catch::Approx(2.0 * m1).epsilon(1e-12));
}
