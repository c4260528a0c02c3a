#include "henon_rings/spectral.hpp"

#include <cmath>

#include <Eigen/LU>

namespace hr {

FourierOrbit to_convention(const FourierOrbit& o, Convention c) {
    if (o.convention == c) return o;
    FourierOrbit r = o;
    r.convention = c;
    r.zc(0) += (c == Convention::Unhat) ? o.tau : -o.tau;
    return r;
}

FourierOrbit embed(const FourierOrbit& o, int n) {
    FourierOrbit r(n, o.tau, o.w1, o.convention);
    r.g = o.g;
    for (int k = -std::min(n, o.N); k <= std::min(n, o.N); ++k) {
        r.zc(k) = o.zc(k);
        r.wc(k) = o.wc(k);
    }
    return r;
}

namespace {

// (a*b)_n for n in [−2N, 2N], stored at n + 2N
Eigen::VectorXcd convolve(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, int N) {
    Eigen::VectorXcd r = Eigen::VectorXcd::Zero(4 * N + 1);
    for (int i = 0; i <= 2 * N; ++i)
        for (int j = 0; j <= 2 * N; ++j) r(i + j) += a(i) * b(j);
    return r;
}

cplx at(const Eigen::VectorXcd& conv, int n, int span) {
    return std::abs(n) <= span ? conv(n + span) : cplx(0);
}

}  // namespace

ResidualVector residual(const FourierOrbit& orbit) {
    const FourierOrbit o = to_convention(orbit, Convention::Unhat);
    const int N = o.N;
    const Eigen::VectorXcd zz = convolve(o.z, o.z, N);
    const Eigen::VectorXcd ww = convolve(o.w, o.w, N);
    const Eigen::VectorXcd zw = convolve(o.z, o.w, N);
    ResidualVector r;
    r.z_residuals.resize(2 * N + 1);
    r.w_residuals.resize(2 * N + 1);
    for (int k = -N; k <= N; ++k) {
        cplx www = 0.0;
        for (int l = -N; l <= N; ++l) www += at(ww, k - 1 - l, 2 * N) * o.wc(l);
        r.z_residuals(k + N) =
            (-3.0 * k * o.g + 1.0 - o.tau) * o.zc(k) + 0.5 * at(zz, k, 2 * N) - www / 3.0;
        r.w_residuals(k + N) = (-(3.0 * k + 1.0) * o.g + o.tau) * o.wc(k) - at(zw, k, 2 * N);
    }
    r.l1 = coefficient_l1(r.z_residuals) + coefficient_l1(r.w_residuals);
    return r;
}

double coefficient_l1(const Eigen::VectorXcd& v) { return v.cwiseAbs().sum(); }

cplx coarse_frequency(cplx tau) {
    const cplx disc = 16.0 + 11.0 * (2.0 * tau - tau * tau);
    if (disc.imag() == 0.0 && disc.real() < 0.0)
        throw NumericalError("BranchFailure", "initial_guess: 16 + 11(2τ − τ²) on the branch cut");
    return (-4.0 - std::sqrt(disc)) / 11.0;
}

FourierOrbit initial_guess(cplx tau, cplx w1, GuessLevel level, int N) {
    if (N < 1) throw std::invalid_argument("initial_guess: N >= 1");
    FourierOrbit o(N, tau, w1, Convention::Hat);
    cplx g = coarse_frequency(tau);
    if (level == GuessLevel::Fine) {
        const cplx th = tau - tau * tau / 2.0;
        for (int it = 0; it < 60; ++it) {
            const cplx f = (5.0 * g - 8.0) * g * (2.0 * g + 1.0) / 3.0 - g + g * g / 2.0 + th;
            const cplx df = (10.0 * g * g + 5.0 * g + (5.0 * g - 8.0) * (4.0 * g + 1.0)) / 3.0 - 1.0 + g;
            const cplx step = f / df;
            g -= step;
            if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(g))) break;
        }
    }
    o.g = g;
    o.zc(0) = -g;
    o.wc(-1) = 3.0 * g * (2.0 * g + 1.0) / (w1 * w1);
    o.zc(-1) = 9.0 * g * g * (2.0 * g + 1.0) / (w1 * w1 * w1);
    if (level == GuessLevel::Fine) {
        o.zc(1) = w1 * w1 * w1 / 9.0;
        o.wc(1) = -w1 * w1 * w1 * w1 / (27.0 * g);
    }
    return o;
}

namespace {

int n_unknowns(int N) { return 4 * N + 2; }

Eigen::VectorXcd pack(const FourierOrbit& o) {
    const int N = o.N;
    Eigen::VectorXcd x(n_unknowns(N));
    x.head(2 * N + 1) = o.z;
    int i = 2 * N + 1;
    for (int k = -N; k <= N; ++k)
        if (k != 0) x(i++) = o.wc(k);
    x(i) = o.g;
    return x;
}

void unpack(const Eigen::VectorXcd& x, FourierOrbit& o) {
    const int N = o.N;
    o.z = x.head(2 * N + 1);
    int i = 2 * N + 1;
    for (int k = -N; k <= N; ++k)
        if (k != 0) o.wc(k) = x(i++);
    o.wc(0) = o.w1;
    o.g = x(i);
}

Eigen::VectorXcd stacked(const ResidualVector& r) {
    Eigen::VectorXcd v(r.z_residuals.size() + r.w_residuals.size());
    v << r.z_residuals, r.w_residuals;
    return v;
}

Eigen::MatrixXcd fd_jacobian(const FourierOrbit& o, double h) {
    const Eigen::VectorXcd x = pack(o);
    const Eigen::VectorXcd r0 = stacked(residual(o));
    Eigen::MatrixXcd J(r0.size(), x.size());
    FourierOrbit p = o;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        Eigen::VectorXcd xp = x;
        xp(j) += h;
        unpack(xp, p);
        J.col(j) = (stacked(residual(p)) - r0) / h;
    }
    return J;
}

}  // namespace

Eigen::MatrixXcd residual_jacobian(const FourierOrbit& orbit) {
    const FourierOrbit o = to_convention(orbit, Convention::Unhat);
    const int N = o.N, M = 2 * N + 1;
    const Eigen::VectorXcd ww = convolve(o.w, o.w, N);
    Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(2 * M, n_unknowns(N));
    auto wcol = [&](int m) { return M + (m < 0 ? m + N : m + N - 1); };
    const int gcol = n_unknowns(N) - 1;
    for (int k = -N; k <= N; ++k) {
        const int zr = k + N, wr = M + k + N;
        J(zr, k + N) += -3.0 * k * o.g + 1.0 - o.tau;
        for (int m = -N; m <= N; ++m) {
            J(zr, m + N) += o.zc(k - m);
            if (m != 0) J(zr, wcol(m)) += -at(ww, k - 1 - m, 2 * N);
            J(wr, m + N) += -o.wc(k - m);
            if (m != 0) J(wr, wcol(m)) += -o.zc(k - m);
        }
        if (k != 0) J(wr, wcol(k)) += -(3.0 * k + 1.0) * o.g + o.tau;
        J(zr, gcol) = -3.0 * k * o.zc(k);
        J(wr, gcol) = -(3.0 * k + 1.0) * o.wc(k);
    }
    return J;
}

FourierOrbit newton_solve(const FourierOrbit& guess, const NewtonOptions& opt, NewtonTrace* trace) {
    if (!(opt.tol >= 1e-14)) throw std::invalid_argument("newton_solve: tol must be >= 1e-14");
    FourierOrbit o = guess;
    o.wc(0) = o.w1;
    for (int it = 0;; ++it) {
        const ResidualVector r = residual(o);
        if (trace) trace->residual_l1.push_back(r.l1);
        if (!std::isfinite(r.l1))
            throw NumericalError("NoConvergence", "newton_solve: residual not finite after " +
                                                      std::to_string(it) + " iterations");
        if (r.l1 < opt.tol) return o;
        if (it == opt.max_iter)
            throw NumericalError("NoConvergence", "newton_solve: " + std::to_string(it) +
                                                      " iterations, final l1 " + std::to_string(r.l1));
        const Eigen::MatrixXcd J =
            opt.jacobian == JacobianMode::Analytic ? residual_jacobian(o) : fd_jacobian(o, opt.fd_step);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(J);
        const Eigen::VectorXcd dx = lu.solve(-stacked(r));
        if (!dx.allFinite() || std::abs(lu.determinant()) == 0.0)
            throw NumericalError("SingularJacobian", "newton_solve: singular Jacobian");
        unpack(pack(o) + dx, o);
    }
}

double tail_residual(const FourierOrbit& orbit, int N_prime) {
    if (N_prime < orbit.N) throw std::invalid_argument("tail_residual: N_prime < N");
    return residual(embed(orbit, N_prime)).l1;
}

PlanarPoint evaluate(const FourierOrbit& o, cplx t) {
    cplx z = 0.0, w = 0.0;
    for (int k = -o.N; k <= o.N; ++k) {
        z += o.zc(k) * std::exp(2.0 * pi * I * (3.0 * k) * o.g * t);
        w += o.wc(k) * std::exp(2.0 * pi * I * (3.0 * k + 1.0) * o.g * t);
    }
    return point(z, w);
}

cplx tau_from_tau_hat(cplx tau_hat) { return 1.0 - std::sqrt(1.0 - 2.0 * tau_hat); }

FourierOrbit reference_orbit(int N) {
    return newton_solve(initial_guess(1.0, 1.4, GuessLevel::Coarse, N));
}

cplx frequency_at(cplx tau_hat, const FourierOrbit* start) {
    FourierOrbit o = start ? *start : reference_orbit();
    const cplx target = tau_from_tau_hat(tau_hat);
    const cplx from = o.tau;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(target - from) / 0.1)));
    for (int s = 1; s <= steps; ++s) {
        o.tau = from + (target - from) * (double(s) / steps);
        o = newton_solve(o, {1e-12, 12});
    }
    return o.g;
}

double frequency_derivative(double tau_hat, double h, const FourierOrbit* start) {
    if (!(h > 0)) throw std::invalid_argument("frequency_derivative: h must be > 0");
    const FourierOrbit ref = start ? *start : reference_orbit();
    const cplx gp = frequency_at(tau_hat + h, &ref);
    const cplx gm = frequency_at(tau_hat - h, &ref);
    return std::real((gp - gm) / (2.0 * h));
}

DecayFit fit_decay(const FourierOrbit& orbit) {
    std::vector<std::pair<double, double>> pts;
    for (int k = -orbit.N; k <= orbit.N; ++k) {
        if (k != 0 && std::abs(orbit.zc(k)) > 0) pts.emplace_back(std::abs(k), std::log(std::abs(orbit.zc(k))));
        if (k != 0 && std::abs(orbit.wc(k)) > 0) pts.emplace_back(std::abs(k), std::log(std::abs(orbit.wc(k))));
    }
    DecayFit f;
    if (pts.size() < 2) return f;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) sx += x, sy += y, sxx += x * x, sxy += x * y;
    const double n = double(pts.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.rho = std::exp(slope);
    for (int k = -orbit.N; k <= orbit.N; ++k) {
        const double s = std::pow(f.rho, std::abs(k));
        f.C = std::max({f.C, std::abs(orbit.zc(k)) / s, std::abs(orbit.wc(k)) / s});
    }
    return f;
}

}  // namespace hr
