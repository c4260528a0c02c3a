#include "henon_rings/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>

namespace hr {

Eigen::MatrixXcd build_linearization_operator(const FourierOrbit& orbit) {
    const FourierOrbit o = to_convention(orbit, Convention::Hat);
    const int N = o.N, M = 2 * N + 1;
    auto ww = [&](int n) {
        cplx s = 0.0;
        for (int l = -N; l <= N; ++l) s += o.wc(l) * o.wc(n - l);
        return s;
    };
    Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(2 * M, 2 * M);
    for (int k = -N; k <= N; ++k) {
        const int ur = k + N, vr = M + k + N;
        L(ur, ur) += 1.0 - 3.0 * k * o.g;
        L(vr, vr) += -(3.0 * k + 1.0) * o.g;
        for (int m = -N; m <= N; ++m) {
            L(ur, m + N) += o.zc(k - m);
            L(ur, M + m + N) += -ww(k - 1 - m);
            L(vr, M + m + N) += -o.zc(k - m);
            L(vr, m + N) += -o.wc(k - m);
        }
    }
    return L;
}

namespace {

Eigen::VectorXcd normalized(const Eigen::VectorXcd& v) {
    Eigen::Index imax;
    v.cwiseAbs().maxCoeff(&imax);
    const cplx phase = std::abs(v(imax)) > 0 ? std::conj(v(imax)) / std::abs(v(imax)) : cplx(1);
    return v.normalized() * phase;
}

Eigen::Index select(const Eigen::VectorXcd& eig, cplx target, const char* name) {
    std::vector<std::pair<double, Eigen::Index>> hits;
    for (Eigen::Index i = 0; i < eig.size(); ++i) {
        const double d = std::abs(eig(i) - target);
        if (d < 0.01) hits.emplace_back(d, i);
    }
    if (hits.empty())
        throw NumericalError("SelectionFailure", std::string("floquet_eigensolve: no eigenvalue near ") + name);
    std::sort(hits.begin(), hits.end());
    if (hits.size() > 1 && hits[1].first - hits[0].first < 1e-12)
        throw NumericalError("SelectionFailure",
                             std::string("floquet_eigensolve: ambiguous eigenvalues near ") + name);
    return hits[0].second;
}

Eigen::VectorXcd stack(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) {
    Eigen::VectorXcd x(u.size() + v.size());
    x << u, v;
    return x;
}

Eigen::VectorXcd pad(const Eigen::VectorXcd& c, int n) {
    const int N = int(c.size() - 1) / 2;
    Eigen::VectorXcd r = Eigen::VectorXcd::Zero(2 * n + 1);
    r.segment(n - N, 2 * N + 1) = c;
    return r;
}

}  // namespace

FloquetData floquet_eigensolve(const FourierOrbit& orbit) {
    if (orbit.N < 7) throw std::invalid_argument("floquet_eigensolve: N >= 7");
    const int N = orbit.N, M = 2 * N + 1;
    const Eigen::MatrixXcd L = build_linearization_operator(orbit);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(L);
    if (es.info() != Eigen::Success)
        throw NumericalError("EigDivergence", "floquet_eigensolve: eigen iteration failed");

    FloquetData d;
    d.N = N;
    d.g = orbit.g;
    d.spectrum = es.eigenvalues();
    const Eigen::Index i1 = select(d.spectrum, 0.0, "0");
    const Eigen::Index i2 = select(d.spectrum, 1.0 - orbit.g, "1-g");
    d.lambda1 = d.spectrum(i1);
    d.lambda2 = d.spectrum(i2);
    const Eigen::VectorXcd b1 = normalized(es.eigenvectors().col(i1));
    const Eigen::VectorXcd b2 = normalized(es.eigenvectors().col(i2));
    d.u1 = b1.head(M);
    d.v1 = b1.tail(M);
    d.u2 = b2.head(M);
    d.v2 = b2.tail(M);
    d.P0 = gauge_matrix(d, 0.0);
    d.det_P0 = d.P0.determinant();
    if (std::abs(d.det_P0) == 0.0) throw NumericalError("SelectionFailure", "floquet_eigensolve: singular P(0)");
    d.P0_inv = d.P0.inverse();
    d.eig_residuals = resolvent_residual(d, orbit, 2 * N);
    return d;
}

std::pair<double, double> resolvent_residual(const FloquetData& data, const FourierOrbit& orbit, int N_prime) {
    if (N_prime < data.N) throw std::invalid_argument("resolvent_residual: N_prime < N");
    const Eigen::MatrixXcd L = build_linearization_operator(embed(orbit, N_prime));
    const Eigen::VectorXcd b1 = stack(pad(data.u1, N_prime), pad(data.v1, N_prime));
    const Eigen::VectorXcd b2 = stack(pad(data.u2, N_prime), pad(data.v2, N_prime));
    return {(L * b1 - data.lambda1 * b1).cwiseAbs().sum(), (L * b2 - data.lambda2 * b2).cwiseAbs().sum()};
}

Eigen::Matrix2cd gauge_matrix(const FloquetData& d, cplx t) {
    Eigen::Matrix2cd P = Eigen::Matrix2cd::Zero();
    for (int k = -d.N; k <= d.N; ++k) {
        const cplx eu = std::exp(2.0 * pi * I * (3.0 * k) * d.g * t);
        const cplx ev = std::exp(2.0 * pi * I * (3.0 * k + 1.0) * d.g * t);
        P(0, 0) += d.u1(k + d.N) * eu;
        P(0, 1) += d.u2(k + d.N) * eu;
        P(1, 0) += d.v1(k + d.N) * ev;
        P(1, 1) += d.v2(k + d.N) * ev;
    }
    return P;
}

DerivedQuantities derived_quantities(const FloquetData& d, const FourierOrbit& orbit) {
    DerivedQuantities q;
    const FourierOrbit hat = to_convention(orbit, Convention::Hat);
    const ModelField field{FieldKind::XHat, tau_hat_of(orbit.tau), UnitConvention::TwoPi};
    q.Xhat_p0 = eval_field(field, evaluate(hat, 0.0)) / field.factor();
    q.Px0 = d.P0_inv * q.Xhat_p0;

    const int N = d.N;
    q.det_coeffs = Eigen::VectorXcd::Zero(4 * N + 1);
    for (int a = -N; a <= N; ++a)
        for (int b = -N; b <= N; ++b)
            q.det_coeffs(a + b + 2 * N) += d.u1(a + N) * d.v2(b + N) - d.u2(a + N) * d.v1(b + N);
    double others = q.det_coeffs.cwiseAbs().sum() - std::abs(q.det_coeffs(2 * N));
    q.det_floor = std::abs(q.det_coeffs(2 * N)) - others;

    q.l1_of_P << d.u1.cwiseAbs().sum(), d.u2.cwiseAbs().sum(), d.v1.cwiseAbs().sum(), d.v2.cwiseAbs().sum();
    q.opnorm_bound = q.l1_of_P.norm();

    const cplx T = 1.0 / d.g;
    q.mu_tilde(0) = T / d.det_P0 * d.v2(N);
    cplx mu2 = 0.0;
    for (int k = -N; k <= N; ++k) {
        const cplx a = (3.0 * k + 1.0) * d.g - 1.0;
        mu2 += d.v1(k + N) * (std::exp(2.0 * pi * I * a * T) - 1.0) / (2.0 * pi * I * a);
    }
    q.mu_tilde(1) = -std::exp(2.0 * pi * I * T * (1.0 - d.g)) * mu2 / d.det_P0;

    if (!(q.det_floor > 0))
        throw NumericalError("DominanceFailure", "derived_quantities: determinant not diagonally dominant");
    return q;
}

double liouville_defect(const FloquetData& d, int samples) {
    const double T = std::abs(1.0 / d.g);
    double worst = 0.0;
    for (int s = 0; s <= samples; ++s) {
        const double t = T * s / samples;
        const cplx r = gauge_matrix(d, t).determinant() * std::exp(-2.0 * pi * I * d.g * t) / d.det_P0;
        worst = std::max(worst, std::abs(r - 1.0));
    }
    return worst;
}

double spectrum_lattice_distance(const FloquetData& d, double radius) {
    if (radius <= 0.0) radius = 1.5 * d.N * std::abs(d.g);
    const cplx step = 3.0 * d.g;
    const int mmax = static_cast<int>(std::ceil(radius / std::abs(step))) + 1;
    std::vector<cplx> lattice;
    for (int m = -mmax; m <= mmax; ++m)
        for (cplx base : {cplx(0.0), 1.0 - d.g}) lattice.push_back(base + double(m) * step);
    auto nearest = [](cplx x, const auto& set) {
        double best = std::numeric_limits<double>::infinity();
        for (cplx y : set) best = std::min(best, std::abs(x - y));
        return best;
    };
    const std::vector<cplx> spec(d.spectrum.data(), d.spectrum.data() + d.spectrum.size());
    double worst = 0.0;
    for (cplx x : spec)
        if (std::abs(x) <= radius) worst = std::max(worst, nearest(x, lattice));
    for (cplx y : lattice)
        if (std::abs(y) <= radius) worst = std::max(worst, nearest(y, spec));
    return worst;
}

}  // namespace hr
