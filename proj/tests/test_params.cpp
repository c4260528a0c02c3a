#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "henon_rings/params.hpp"

using namespace hr;

TEST_CASE("resonant limit") {
    const Params p = params_from_resonant(1.0, 1.0, 0.0);
    CHECK(std::abs(p.alpha - 1.0 / 6.0) < 1e-15);
    CHECK(std::abs(p.beta - 1.0 / 3.0) < 1e-15);
    CHECK(std::abs(p.c - 0.25) < 1e-15);
}

TEST_CASE("multiplier and fixed-point identities over random parameters") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const cplx tau(1.0 + 0.5 * u(rng), 0.5 * u(rng));
        const cplx mbeta(u(rng), 0.3 * u(rng));
        const double delta = 0.05 * std::abs(u(rng));
        const Params p = params_from_resonant(tau, mbeta, delta);
        CHECK(std::abs(p.beta - (1.0 / 3.0 + delta * mbeta)) < 1e-15);
        CHECK(std::abs(p.alpha - (1.0 / 6.0 + delta * (tau - 0.5) * mbeta)) < 1e-15);
        CHECK(std::abs(p.lambda1 * p.lambda2 - std::exp(2.0 * pi * I * p.beta)) < 1e-12);
        const cplx t = p.t_alpha();
        CHECK(std::min(std::abs(t - p.t_plus), std::abs(t - p.t_minus)) < 1e-10);
        CHECK(std::abs(p.lambda1 + p.lambda2 - 2.0 * t * std::exp(I * pi * p.beta)) < 1e-12);
        for (cplx r : {p.t_plus, p.t_minus})
            CHECK(std::abs(r * r - 2.0 * r * std::cos(pi * p.beta) + p.c) < 1e-12);
        CHECK(std::abs(p.lambda1 - std::exp(2.0 * pi * I * (-p.alpha + p.beta / 2.0))) < 1e-15);
    }
}

TEST_CASE("real alpha gives unimodular multipliers") {
    const Params p = params_from_resonant(0.8, 0.7, 0.02);
    CHECK(std::abs(std::abs(p.lambda1) - 1.0) < 1e-14);
    CHECK(std::abs(std::abs(p.lambda2) - 1.0) < 1e-14);
}

TEST_CASE("c is real to third order on the vertical branch") {
    const double i2 = std::abs(params_from_resonant(cplx(1.0, 0.3), 1.0, 1e-2).c.imag());
    const double i3 = std::abs(params_from_resonant(cplx(1.0, 0.3), 1.0, 1e-3).c.imag());
    CHECK(i2 > 0.0);
    CHECK(i2 / i3 == doctest::Approx(1000.0).epsilon(0.05));
}

TEST_CASE("alpha from (beta, c): Ushiki values") {
    const auto [ap, am] = alpha_from_beta_c(1.02773 / pi, 0.269423);
    const cplx tp = std::cos(2.0 * pi * ap), tm = std::cos(2.0 * pi * am);
    CHECK(std::abs(tp - cplx(0.5167, 0.0487)) < 1e-4);
    CHECK(std::abs(tm - cplx(0.5167, -0.0487)) < 1e-4);
}

TEST_CASE("alpha from (beta, c): double root") {
    const auto [ap, am] = alpha_from_beta_c(1.0 / 3.0, 0.25);
    CHECK(std::abs(ap - 1.0 / 6.0) < 1e-7);
    CHECK(std::abs(am - 1.0 / 6.0) < 1e-7);
}

TEST_CASE("alpha round trip") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const Params p = params_from_resonant(cplx(1.0 + 0.5 * u(rng), 0.3 * u(rng)), cplx(u(rng), 0.2 * u(rng)),
                                              0.05 * std::abs(u(rng)) + 1e-4);
        const auto [ap, am] = alpha_from_beta_c(p.beta, p.c);
        CHECK(std::min(std::abs(ap - p.alpha), std::abs(am - p.alpha)) < 1e-10);
        CHECK(std::abs(c_of(ap, p.beta) - p.c) < 1e-10);
        const Params q = params_from_beta_c(p.beta, p.c);
        CHECK((std::abs(q.alpha - ap) < 1e-15 || std::abs(q.alpha - am) < 1e-15));
        CHECK(std::abs(q.beta - p.beta) < 1e-15);
        CHECK(std::abs(q.beta - 1.0 / 3.0 - q.delta * q.mbeta) < 1e-15);
    }
}

TEST_CASE("reversibility tau") {
    CHECK(reversibility_tau(0.0, 0.4, 0.01) == cplx(1.0, 0.0));

    const cplx tau = reversibility_tau(0.3, 0.5, 0.01);
    CHECK(tau.imag() == 0.3);
    CHECK(std::abs(params_from_resonant(tau, 0.5, 0.01).c.imag()) < 1e-12);
    CHECK(std::abs(tau - cplx(1.0, 0.3)) < 10 * 0.01);

    // bisection on the sign of Im c along Re τ
    auto imc = [](double x) { return params_from_resonant(cplx(x, 0.3), 0.5, 0.01).c.imag(); };
    double a = 0.9, b = 1.1;
    REQUIRE(imc(a) * imc(b) < 0);
    for (int i = 0; i < 200 && b - a > 1e-15; ++i) {
        const double m = 0.5 * (a + b);
        (imc(a) * imc(m) <= 0 ? b : a) = m;
    }
    CHECK(std::abs(tau.real() - 0.5 * (a + b)) < 1e-8);
}

TEST_CASE("reversibility tau is continuous along the curve") {
    cplx prev = reversibility_tau(0.0, 0.8, 0.02);
    for (int i = 1; i <= 20; ++i) {
        const cplx tau = reversibility_tau(0.04 * i, 0.8, 0.02);
        CHECK(std::abs(tau.real() - prev.real()) < 0.01);
        prev = tau;
    }
}

TEST_CASE("reversibility tau reports non-convergence") {
    CHECK_THROWS_AS(reversibility_tau(0.3, 0.5, std::nan("")), NumericalError);
}
