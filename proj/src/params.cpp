#include "henon_rings/params.hpp"

#include <cmath>

namespace hr {

cplx c_of(cplx alpha, cplx beta) {
    const cplx t = std::cos(2.0 * pi * alpha);
    return -t * t + 2.0 * t * std::cos(pi * beta);
}

// principal √ with a signed-zero imaginary part read as +0
static cplx principal_sqrt(cplx x) { return std::sqrt(cplx(x.real(), x.imag() + 0.0)); }

static void fill_derived(Params& p) {
    p.c = c_of(p.alpha, p.beta);
    p.lambda1 = std::exp(2.0 * pi * I * (-p.alpha + p.beta / 2.0));
    p.lambda2 = std::exp(2.0 * pi * I * (p.alpha + p.beta / 2.0));
    const cplx cb = std::cos(pi * p.beta);
    const cplx d = principal_sqrt(cb * cb - p.c);
    p.t_plus = cb + d;
    p.t_minus = cb - d;
}

Params params_from_resonant(cplx tau, cplx mbeta, double delta) {
    Params p;
    p.tau = tau;
    p.mbeta = mbeta;
    p.delta = delta;
    p.beta = 1.0 / 3.0 + delta * mbeta;
    p.alpha = 1.0 / 6.0 + delta * (tau - 0.5) * mbeta;
    fill_derived(p);
    return p;
}

std::pair<cplx, cplx> alpha_from_beta_c(cplx beta, cplx c) {
    const cplx cb = std::cos(pi * beta);
    const cplx d = principal_sqrt(cb * cb - c);
    return {std::acos(cb + d) / (2.0 * pi), std::acos(cb - d) / (2.0 * pi)};
}

Params params_from_beta_c(cplx beta, cplx c) {
    auto [ap, am] = alpha_from_beta_c(beta, c);
    Params p;
    p.beta = beta;
    p.alpha = std::abs(ap - 1.0 / 6.0) <= std::abs(am - 1.0 / 6.0) ? ap : am;
    const cplx db = beta - 1.0 / 3.0;
    if (std::abs(db) > 0.0) {
        p.delta = std::abs(db);
        p.mbeta = db / p.delta;
        p.tau = 0.5 + (p.alpha - 1.0 / 6.0) / db;
    } else {
        p.delta = 0.0;
        p.mbeta = 1.0;
        p.tau = 1.0;
    }
    fill_derived(p);
    // keep the caller's c bitwise; the recomputed one only differs by rounding
    p.c = c;
    return p;
}

cplx reversibility_tau(double t, double mbeta, double delta) {
    if (t == 0.0) return cplx(1.0, 0.0);
    auto imc = [&](double x) {
        return std::imag(params_from_resonant(cplx(x, t), mbeta, delta).c);
    };
    double x = 1.0;
    for (int it = 0; it < 50; ++it) {
        const double f = imc(x);
        if (std::abs(f) < 1e-12) return cplx(x, t);
        const double h = 1e-7 * std::max(1.0, std::abs(cplx(x, t)));
        const double df = (imc(x + h) - imc(x - h)) / (2.0 * h);
        if (df == 0.0 || !std::isfinite(df))
            throw NumericalError("NoConvergence", "reversibility_tau: flat Im c");
        x -= f / df;
    }
    if (std::abs(imc(x)) < 1e-12) return cplx(x, t);
    throw NumericalError("NoConvergence", "reversibility_tau: Im c did not reach 1e-12");
}

}  // namespace hr
