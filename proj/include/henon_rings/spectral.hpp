#pragma once

#include <vector>

#include "henon_rings/core.hpp"

namespace hr {

enum class Convention { Hat, Unhat };

// z(t) = Σ z_{3k} e^{2πi·3k·g·t}, w(t) = Σ w_{3k+1} e^{2πi(3k+1)g·t}, |k| ≤ N.
// Coefficients are stored at index k + N. Under Hat the k = 0 z entry holds ẑ₀ = z₀ − τ.
struct FourierOrbit {
    int N = 0;
    cplx g;
    cplx w1{1.4};
    Eigen::VectorXcd z;
    Eigen::VectorXcd w;
    cplx tau{1.0};
    Convention convention = Convention::Hat;

    FourierOrbit() = default;
    FourierOrbit(int n, cplx tau_, cplx w1_, Convention c = Convention::Hat)
        : N(n), w1(w1_), z(Eigen::VectorXcd::Zero(2 * n + 1)), w(Eigen::VectorXcd::Zero(2 * n + 1)),
          tau(tau_), convention(c) {
        w(n) = w1_;
    }

    cplx& zc(int k) { return z(k + N); }
    cplx& wc(int k) { return w(k + N); }
    cplx zc(int k) const { return std::abs(k) <= N ? z(k + N) : cplx(0); }
    cplx wc(int k) const { return std::abs(k) <= N ? w(k + N) : cplx(0); }
};

FourierOrbit to_convention(const FourierOrbit& o, Convention c);

// zero-padded copy with harmonic cutoff n (n ≥ o.N), or truncated when n < o.N
FourierOrbit embed(const FourierOrbit& o, int n);

struct ResidualVector {
    Eigen::VectorXcd z_residuals;  // rows k = −N..N
    Eigen::VectorXcd w_residuals;
    double l1 = 0.0;
};

ResidualVector residual(const FourierOrbit& orbit);

enum class GuessLevel { Coarse, Fine };

cplx coarse_frequency(cplx tau);
FourierOrbit initial_guess(cplx tau, cplx w1 = 1.4, GuessLevel level = GuessLevel::Coarse, int N = 12);

enum class JacobianMode { Analytic, FiniteDifference };

struct NewtonOptions {
    double tol = 1e-12;
    int max_iter = 8;
    JacobianMode jacobian = JacobianMode::Analytic;
    double fd_step = 1e-4;
};

struct NewtonTrace {
    std::vector<double> residual_l1;  // before each step, then the final value
};

// Jacobian of the residual rows with respect to (z_{−N..N}, w_{k≠0}, g)
Eigen::MatrixXcd residual_jacobian(const FourierOrbit& orbit);

FourierOrbit newton_solve(const FourierOrbit& guess, const NewtonOptions& opt = {},
                          NewtonTrace* trace = nullptr);

double tail_residual(const FourierOrbit& orbit, int N_prime);

PlanarPoint evaluate(const FourierOrbit& orbit, cplx t);

double coefficient_l1(const Eigen::VectorXcd& v);

// τ = 1 − √(1 − 2τ̂), principal branch
cplx tau_from_tau_hat(cplx tau_hat);

// ĝ(τ̂) by continuation from the τ = 1 solve (or from `start` when given)
cplx frequency_at(cplx tau_hat, const FourierOrbit* start = nullptr);
double frequency_derivative(double tau_hat, double h, const FourierOrbit* start = nullptr);

// least-squares fit |c_k| ≈ C ρ^{|k|} over all nonzero z and w coefficients
struct DecayFit {
    double C = 0.0;
    double rho = 0.0;
};
DecayFit fit_decay(const FourierOrbit& orbit);

// the τ = 1, N = 12, w₁ = 1.4 reference solve
FourierOrbit reference_orbit(int N = 12);

}  // namespace hr
