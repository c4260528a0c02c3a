#pragma once

#include <utility>

#include "henon_rings/core.hpp"

namespace hr {

struct Params {
    cplx tau{1.0};
    cplx mbeta{1.0};
    double delta = 0.0;
    cplx alpha;
    cplx beta;
    cplx c;
    cplx lambda1;
    cplx lambda2;
    cplx t_plus;
    cplx t_minus;

    // abscissa t = cos 2πα of the fixed point whose multipliers are λ₁, λ₂
    cplx t_alpha() const { return std::cos(2.0 * pi * alpha); }
};

// c = −cos²(2πα) + 2cos(2πα)cos(πβ)
cplx c_of(cplx alpha, cplx beta);

Params params_from_resonant(cplx tau, cplx mbeta, double delta);

// Params for a raw Hénon pair (β, c); α taken on the branch with Re α ∈ [0, 1/2]
// nearest 1/6, and (τ, β̊, δ) read back with |β̊| = 1 when β ≠ 1/3.
Params params_from_beta_c(cplx beta, cplx c);

std::pair<cplx, cplx> alpha_from_beta_c(cplx beta, cplx c);

// τ with Im τ = t and Im c_δ(τ, β̊) = 0, Re τ near 1
cplx reversibility_tau(double t, double mbeta, double delta);

}  // namespace hr
