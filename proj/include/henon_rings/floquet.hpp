#pragma once

#include <utility>

#include "henon_rings/spectral.hpp"
#include "henon_rings/vfield.hpp"

namespace hr {

// Eigenpairs (λ̃ⱼ, (ũⱼ, ṽⱼ)) of the truncated linearization, λ̃₁ ≈ 0 and λ̃₂ ≈ 1 − g.
// ũⱼ holds the harmonics 3k and ṽⱼ the harmonics 3k + 1, |k| ≤ N, at index k + N.
struct FloquetData {
    int N = 0;
    cplx g;
    cplx lambda1, lambda2;
    Eigen::VectorXcd u1, v1, u2, v2;
    Eigen::Matrix2cd P0;
    Eigen::Matrix2cd P0_inv;
    cplx det_P0;
    std::pair<double, double> eig_residuals{0.0, 0.0};  // (ee1, ee2) at N′ = 2N
    Eigen::VectorXcd spectrum;
};

// L_N on (u_{3k}, v_{3k+1}):
//   (L(u,v))_u,k = (1 − 3kg)u_k + (ẑ∗u)_k − (w∗w∗v)_{k−1}
//   (L(u,v))_v,k = −(3k + 1)g v_k − (ẑ∗v)_k − (w∗u)_k
Eigen::MatrixXcd build_linearization_operator(const FourierOrbit& orbit);

FloquetData floquet_eigensolve(const FourierOrbit& orbit);

std::pair<double, double> resolvent_residual(const FloquetData& data, const FourierOrbit& orbit,
                                             int N_prime);

struct DerivedQuantities {
    Eigen::Vector2cd Xhat_p0;  // X̂(p(0)) / 2πi
    Eigen::Vector2cd Px0;      // P̃(0)⁻¹ X̂(p(0)) / 2πi
    Eigen::Vector2cd mu_tilde;
    Eigen::VectorXcd det_coeffs;  // d_{3k+1}, |k| ≤ 2N, index k + 2N
    double det_floor = 0.0;
    Eigen::Matrix2d l1_of_P;
    double opnorm_bound = 0.0;
};

DerivedQuantities derived_quantities(const FloquetData& data, const FourierOrbit& orbit);

Eigen::Matrix2cd gauge_matrix(const FloquetData& data, cplx t);

// max over t ∈ [0, |T|] of |det P̃(t) e^{−2πigt} / det P̃(0) − 1|
double liouville_defect(const FloquetData& data, int samples = 200);

// Hausdorff distance between the spectrum and {0, 1 − g} + 3gℤ, both restricted to the disk
// |λ| ≤ radius (default 1.5·N·|g|, away from the truncation edge where the lattice breaks up)
double spectrum_lattice_distance(const FloquetData& data, double radius = 0.0);

}  // namespace hr
