#include "henon_rings/vfield.hpp"

#include <algorithm>
#include <cmath>

namespace hr {

PlanarPoint eval_field(const ModelField& f, const PlanarPoint& p) {
    const cplx z = p(0), w = p(1), u = f.factor();
    const cplx w3 = w * w * w / 3.0;
    if (f.kind == FieldKind::XTau)
        return point(u * ((1.0 - f.tau) * z + z * z / 2.0 - w3), u * (f.tau * w - z * w));
    return point(u * (f.tau + z + z * z / 2.0 - w3), u * (-z * w));
}

Eigen::Matrix2cd field_jacobian(const ModelField& f, const PlanarPoint& p) {
    const cplx z = p(0), w = p(1), u = f.factor();
    Eigen::Matrix2cd J;
    if (f.kind == FieldKind::XTau)
        J << (1.0 - f.tau) + z, -w * w, -w, f.tau - z;
    else
        J << 1.0 + z, -w * w, -w, -z;
    return u * J;
}

namespace {

// Dormand–Prince 5(4)
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double abs_floor = 1e-13;

}  // namespace

FlowResult flow(const ModelField& f, const PlanarPoint& seed, const std::vector<cplx>& path,
                double rel_tol) {
    if (!(rel_tol >= 1e-13 && rel_tol <= 1e-6))
        throw std::invalid_argument("flow: rel_tol outside [1e-13, 1e-6]");
    if (path.empty()) throw std::invalid_argument("flow: empty path");
    FlowResult out;
    out.tolerance_used = rel_tol;
    out.samples.push_back({path.front(), seed});
    PlanarPoint y = seed;

    for (std::size_t seg = 0; seg + 1 < path.size(); ++seg) {
        const cplx t0 = path[seg], dt = path[seg + 1] - path[seg];
        if (dt == cplx(0)) continue;
        auto F = [&](const PlanarPoint& p) -> PlanarPoint { return dt * eval_field(f, p); };

        double s = 0.0, h = 0.01, err_prev = 1.0;
        PlanarPoint k1 = F(y);
        while (s < 1.0) {
            h = std::min(h, 1.0 - s);
            if (h < 1e-14)
                throw NumericalError("StepFailure", "flow: step size underflow near t = " +
                                                        std::to_string(std::abs(t0 + s * dt)));
            const PlanarPoint k2 = F(y + h * (a21 * k1));
            const PlanarPoint k3 = F(y + h * (a31 * k1 + a32 * k2));
            const PlanarPoint k4 = F(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
            const PlanarPoint k5 = F(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
            const PlanarPoint k6 = F(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            const PlanarPoint yn = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            const PlanarPoint k7 = F(yn);
            const PlanarPoint e = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

            double err = 0.0;
            for (int i = 0; i < 2; ++i) {
                const double sc = abs_floor + rel_tol * std::max(std::abs(y(i)), std::abs(yn(i)));
                err = std::max(err, std::abs(e(i)) / sc);
            }
            if (!std::isfinite(err)) {
                ++out.rejected_steps;
                h *= 0.2;
                continue;
            }
            if (err <= 1.0) {
                s = (1.0 - s - h < 1e-15) ? 1.0 : s + h;
                y = yn;
                k1 = k7;
                out.samples.push_back({t0 + s * dt, y});
                // PI controller
                const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) *
                                   std::pow(err_prev, 0.4 / 5.0);
                h *= std::clamp(fac, 0.2, 5.0);
                err_prev = std::max(err, 1e-4);
            } else {
                ++out.rejected_steps;
                h *= std::max(0.2, 0.9 * std::pow(err, -1.0 / 5.0));
            }
        }
        out.samples.back().t = path[seg + 1];
    }
    return out;
}

std::vector<FixedPoint> fixed_points(const ModelField& f) {
    const cplx th = f.kind == FieldKind::XHat ? f.tau : tau_hat_of(f.tau);
    const cplx shift = f.kind == FieldKind::XHat ? cplx(0) : f.tau;
    const cplx u = f.factor();
    std::vector<FixedPoint> out;
    const cplx r = std::sqrt(1.0 - 2.0 * th);
    for (cplx z : {-1.0 + r, -1.0 - r}) {
        FixedPoint fp;
        fp.point = point(z + shift, 0.0);
        fp.eigenvalues << u * (1.0 + z), u * (-z);
        out.push_back(fp);
    }
    const cplx w0 = principal_pow(3.0 * th, 1.0 / 3.0);
    const cplx s = std::sqrt(1.0 + 12.0 * th);
    for (int k = 0; k < 3; ++k) {
        FixedPoint fp;
        fp.point = point(shift, w0 * std::pow(jroot, k));
        fp.eigenvalues << u * (1.0 + s) / 2.0, u * (1.0 - s) / 2.0;
        out.push_back(fp);
    }
    return out;
}

PlanarPoint seed_locator(cplx mbeta, double delta) {
    const cplx r = 2.354 * principal_pow(pi * std::sqrt(3.0) * mbeta * delta, 2.0 / 3.0);
    return point(0.5 + r * jroot, 0.5 + r);
}

}  // namespace hr
