#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "henon_rings/spectral.hpp"
#include "henon_rings/vfield.hpp"

using namespace hr;

namespace {

const FourierOrbit& solved() {
    static const FourierOrbit o = reference_orbit(12);
    return o;
}

double max_imag(const FourierOrbit& o) {
    return std::max({o.z.imag().cwiseAbs().maxCoeff(), o.w.imag().cwiseAbs().maxCoeff(), std::abs(o.g.imag())});
}

FourierOrbit rotated(FourierOrbit o, cplx theta) {
    for (int k = -o.N; k <= o.N; ++k) {
        o.zc(k) *= std::exp(3.0 * k * theta);
        o.wc(k) *= std::exp((3.0 * k + 1.0) * theta);
    }
    o.w1 = o.wc(0);
    return o;
}

}  // namespace

TEST_CASE("golden τ = 1 solve") {
    const FourierOrbit& o = solved();
    CHECK(std::abs(o.g - (-0.8345538969681955)) < 1e-9);
    CHECK(std::abs(o.zc(-1) - (-1.1509120242609674)) < 1e-8);
    CHECK(std::abs(o.wc(-1) - 0.6229635928580461) < 1e-8);
    CHECK(residual(o).l1 < 1e-12);
    CHECK(o.wc(0) == cplx(1.4));
    const PlanarPoint p0 = evaluate(o, 0.0);
    CHECK(std::abs(p0(0) - 0.1144256218278379) < 1e-9);
    CHECK(std::abs(p0(1) - 2.3543381748256222) < 1e-9);
    CHECK(std::abs(coefficient_l1(o.z) - 2.495127140332043) < 1e-8);
}

TEST_CASE("solution is real at τ = 1") { CHECK(max_imag(solved()) < 1e-10); }

TEST_CASE("tail residual") {
    const FourierOrbit& o = solved();
    const double t24 = tail_residual(o, 24), t36 = tail_residual(o, 36);
    CHECK(t24 < 1e-7);
    CHECK(t24 == doctest::Approx(7.279312515841349e-08).epsilon(1e-3));
    CHECK(t36 <= 1.1 * t24);
    CHECK(tail_residual(o, 12) < 1e-12);
}

TEST_CASE("residual of the zero orbit is the forcing") {
    FourierOrbit o(3, 1.0, 1.4, Convention::Unhat);
    o.g = -0.8;
    const ResidualVector r = residual(o);
    const cplx w1 = 1.4;
    for (int k = -3; k <= 3; ++k) {
        CHECK(std::abs(r.z_residuals(k + 3) - (k == 1 ? -w1 * w1 * w1 / 3.0 : cplx(0))) < 1e-15);
        CHECK(std::abs(r.w_residuals(k + 3) - (k == 0 ? (0.8 + 1.0) * w1 : cplx(0))) < 1e-15);
    }
}

TEST_CASE("coarse guess frequency") {
    CHECK(std::abs(coarse_frequency(1.0) - (-4.0 - std::sqrt(27.0)) / 11.0) < 1e-15);
    CHECK(std::abs(coarse_frequency(1.0) - (-0.836)) < 1e-3);
    const FourierOrbit g0 = initial_guess(0.0, 1.4, GuessLevel::Coarse, 3);
    const cplx g = -8.0 / 11.0;
    CHECK(std::abs(g0.g - g) < 1e-15);
    CHECK(std::abs(g0.wc(-1) - 3.0 * g * (2.0 * g + 1.0) / (1.4 * 1.4)) < 1e-15);
    CHECK(std::abs(g0.zc(-1) - 9.0 * g * g * (2.0 * g + 1.0) / (1.4 * 1.4 * 1.4)) < 1e-15);
    CHECK(std::abs(to_convention(g0, Convention::Hat).zc(0) + g) < 1e-15);
}

TEST_CASE("coarse guess lies in the Newton basin") {
    const FourierOrbit g = initial_guess(1.0, 1.4, GuessLevel::Coarse, 12);
    NewtonTrace tr;
    newton_solve(g, {}, &tr);
    CHECK(tr.residual_l1.back() < 1e-12);
    CHECK(residual(g).l1 < 0.5);
}

TEST_CASE("N = 1 fine ansatz closes on the retained harmonics") {
    for (cplx tau : {cplx(1.0), cplx(0.9, 0.05)}) {
        const FourierOrbit o = initial_guess(tau, 1.4, GuessLevel::Fine, 1);
        CHECK(residual(o).l1 < 1e-12);
    }
    const FourierOrbit c = initial_guess(1.0, 1.4, GuessLevel::Coarse, 1);
    const ResidualVector r = residual(c);
    CHECK(std::abs(r.z_residuals(2) - (-std::pow(1.4, 3) / 3.0)) < 1e-12);
    CHECK(r.l1 == doctest::Approx(std::pow(1.4, 3) / 3.0).epsilon(1e-12));
}

TEST_CASE("branch failure on the cut") {
    // 16 + 11(2τ − τ²) on the negative real axis: τ = 1 + √(27/11)·s, s > 1
    try {
        coarse_frequency(1.0 + std::sqrt(27.0 / 11.0) * 1.5);
        FAIL("expected BranchFailure");
    } catch (const NumericalError& e) {
        CHECK(e.kind() == "BranchFailure");
    }
}

TEST_CASE("idempotence") {
    NewtonTrace tr;
    const FourierOrbit o = newton_solve(solved(), {1e-12, 1}, &tr);
    CHECK(residual(o).l1 < 1e-12);
    CHECK(std::abs(o.g - solved().g) < 1e-12);
}

TEST_CASE("quadratic convergence") {
    NewtonTrace tr;
    newton_solve(initial_guess(1.0, 1.4, GuessLevel::Coarse, 12), {}, &tr);
    const auto& r = tr.residual_l1;
    REQUIRE(r.size() >= 3);
    int checked = 0;
    for (std::size_t n = 0; n + 1 < r.size(); ++n)
        if (r[n] < 1e-2 && r[n + 1] > 1e-13) {
            CHECK(r[n + 1] <= 10.0 * r[n] * r[n]);
            ++checked;
        }
    CHECK(checked >= 1);
}

TEST_CASE("finite-difference Jacobian converges to the same orbit") {
    NewtonOptions opt;
    opt.jacobian = JacobianMode::FiniteDifference;
    const FourierOrbit o = newton_solve(initial_guess(1.0, 1.4, GuessLevel::Coarse, 12), opt);
    CHECK(std::abs(o.g - solved().g) < 1e-10);
}

TEST_CASE("Newton failures") {
    try {
        newton_solve(initial_guess(1.0, 1.4, GuessLevel::Coarse, 12), {1e-12, 1});
        FAIL("expected NoConvergence");
    } catch (const NumericalError& e) {
        CHECK(e.kind() == "NoConvergence");
    }
    FourierOrbit z(2, 1.0, 0.0);
    z.g = 0.0;
    try {
        newton_solve(z);
        FAIL("expected SingularJacobian");
    } catch (const NumericalError& e) {
        CHECK(e.kind() == "SingularJacobian");
    }
}

TEST_CASE("time translation leaves the residual norm unchanged") {
    const FourierOrbit g = initial_guess(1.0, 1.4, GuessLevel::Fine, 12);
    const double before = residual(g).l1;
    for (double s : {0.1, 0.37, -1.2}) {
        const cplx theta = 2.0 * pi * I * g.g * s;
        CHECK(residual(rotated(g, theta)).l1 == doctest::Approx(before).epsilon(1e-12));
        CHECK(residual(rotated(solved(), theta)).l1 < 1e-12);
    }
}

TEST_CASE("evaluate: period, symmetry, ODE") {
    const FourierOrbit& o = solved();
    const cplx T = 1.0 / o.g;
    const ModelField f{FieldKind::XHat, tau_hat_of(o.tau), UnitConvention::TwoPi};
    double sym = 0.0, ode = 0.0;
    for (int i = 0; i < 50; ++i) {
        const cplx t = T * (i / 50.0);
        const PlanarPoint p = evaluate(o, t);
        CHECK((evaluate(o, t + T) - p).norm() < 1e-12);
        const PlanarPoint q = evaluate(o, t + T / 3.0);
        sym = std::max(sym, (q - point(p(0), jroot * p(1))).norm());
        const double h = 1e-5;
        const PlanarPoint d = (evaluate(o, t + h) - evaluate(o, t - h)) / (2 * h);
        ode = std::max(ode, (d - eval_field(f, p)).norm() / eval_field(f, p).norm());
    }
    CHECK(sym < 1e-12);
    CHECK(ode < 1e-6);
}

TEST_CASE("hat / unhat conversion") {
    const FourierOrbit& o = solved();
    const FourierOrbit u = to_convention(o, Convention::Unhat);
    CHECK(u.zc(0) == o.zc(0) + o.tau);
    CHECK(u.convention == Convention::Unhat);
    const FourierOrbit back = to_convention(u, Convention::Hat);
    CHECK((back.z - o.z).norm() < 1e-15);
    CHECK((to_convention(o, Convention::Hat).z - o.z).norm() == 0.0);
    CHECK(residual(u).l1 < 1e-12);
}

TEST_CASE("embed pads and truncates") {
    const FourierOrbit& o = solved();
    const FourierOrbit e = embed(o, 20);
    CHECK(e.N == 20);
    CHECK(e.zc(12) == o.zc(12));
    CHECK(e.zc(13) == cplx(0));
    CHECK((embed(e, 12).z - o.z).norm() == 0.0);
}

TEST_CASE("frequency derivative at τ̂ = 1/2") {
    const double d = frequency_derivative(0.5, 1e-3);
    CHECK(d > -0.28);
    CHECK(d < -0.08);
    CHECK(std::abs(d - (-0.18)) < 0.1);
    CHECK(std::abs(d - (-1.0 / std::sqrt(27.0))) < 0.05);
    CHECK(std::abs(frequency_derivative(0.5, 5e-4) - d) < 1e-3);
    CHECK(std::abs(frequency_at(0.5) - solved().g) < 1e-12);
}

TEST_CASE("coefficient decay") {
    const FourierOrbit& o = solved();
    const DecayFit fit = fit_decay(o);
    CHECK(fit.rho > 0.0);
    CHECK(fit.rho < 1.0);
    for (int k = -o.N; k <= o.N; ++k) {
        CHECK(std::abs(o.zc(k)) <= fit.C * std::pow(fit.rho, std::abs(k)) * (1 + 1e-12));
        CHECK(std::abs(o.wc(k)) <= fit.C * std::pow(fit.rho, std::abs(k)) * (1 + 1e-12));
    }
}
