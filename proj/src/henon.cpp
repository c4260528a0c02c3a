#include "henon_rings/henon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <unsupported/Eigen/FFT>

namespace hr {

namespace {

bool finite(const PlanarPoint& p) {
    return std::isfinite(p(0).real()) && std::isfinite(p(0).imag()) &&
           std::isfinite(p(1).real()) && std::isfinite(p(1).imag());
}

PlanarPoint checked(const PlanarPoint& p, const char* who) {
    if (!finite(p)) throw NumericalError("NonFinite", std::string(who) + ": overflow");
    return p;
}

double maxabs(const PlanarPoint& p) { return std::max(std::abs(p(0)), std::abs(p(1))); }

}  // namespace

PlanarPoint henon_step(const PlanarPoint& p, cplx beta, cplx c) {
    auto [x, y] = henon_map(p(0), p(1), beta, c);
    return checked(point(x, y), "henon_step");
}

PlanarPoint henon_inverse_step(const PlanarPoint& p, cplx beta, cplx c) {
    auto [x, y] = henon_inverse_map(p(0), p(1), beta, c);
    return checked(point(x, y), "henon_inverse_step");
}

PlanarPoint henon_mod_step(const PlanarPoint& p, const Params& params) {
    if (std::abs(params.lambda1 - params.lambda2) < 1e-12)
        throw NumericalError("DegenerateMultipliers", "henon_mod_step: lambda1 == lambda2");
    auto [z, w] = henon_mod_map(p(0), p(1), params);
    return checked(point(z, w), "henon_mod_step");
}

PlanarPoint henon_involution(const PlanarPoint& p) {
    return point(std::conj(p(1)), std::conj(p(0)));
}

PlanarPoint mod_to_henon(const PlanarPoint& zw, const Params& params) {
    const cplx t = params.t_alpha();
    return point(params.lambda1 * zw(0) + params.lambda2 * zw(1) + t, zw(0) + zw(1) + t);
}

PlanarPoint henon_to_mod(const PlanarPoint& xy, const Params& params) {
    const cplx t = params.t_alpha();
    const cplx X = xy(0) - t, Y = xy(1) - t;
    const cplx d = params.lambda1 - params.lambda2;
    return point((X - params.lambda2 * Y) / d, (-X + params.lambda1 * Y) / d);
}

std::string to_string(MapKind k) { return k == MapKind::Henon ? "Henon" : "HenonMod"; }

std::string to_string(OrbitStatus s) {
    switch (s) {
        case OrbitStatus::Bounded: return "Bounded";
        case OrbitStatus::Escaped: return "Escaped";
        default: return "NonFinite";
    }
}

MapKind map_kind_from_string(const std::string& s) {
    if (s == "Henon") return MapKind::Henon;
    if (s == "HenonMod") return MapKind::HenonMod;
    throw std::invalid_argument("unknown map kind: " + s);
}

OrbitStatus orbit_status_from_string(const std::string& s) {
    if (s == "Bounded") return OrbitStatus::Bounded;
    if (s == "Escaped") return OrbitStatus::Escaped;
    if (s == "NonFinite") return OrbitStatus::NonFinite;
    throw std::invalid_argument("unknown orbit status: " + s);
}

OrbitTrace iterate(const PlanarPoint& seed, MapKind map, const Params& params, int n,
                   double escape_radius) {
    if (n < 1) throw std::invalid_argument("iterate: n must be >= 1");
    if (!(escape_radius > 0)) throw std::invalid_argument("iterate: escape_radius must be > 0");
    OrbitTrace tr;
    tr.params = params;
    tr.seed = seed;
    tr.map = map;
    tr.n_steps = n;
    tr.escape_radius = escape_radius;
    if (!finite(seed)) {
        tr.status = OrbitStatus::NonFinite;
        tr.status_step = 0;
        return tr;
    }
    tr.points.reserve(n + 1);
    tr.points.push_back(seed);
    if (maxabs(seed) > escape_radius) {
        tr.status = OrbitStatus::Escaped;
        tr.status_step = 0;
        return tr;
    }
    const cplx e1 = std::exp(I * pi * params.beta);
    const cplx e2 = std::exp(2.0 * I * pi * params.beta);
    PlanarPoint p = seed;
    for (int k = 1; k <= n; ++k) {
        if (map == MapKind::Henon) {
            p = point(e1 * (p(0) * p(0) + params.c) - e2 * p(1), p(0));
        } else {
            auto [z, w] = henon_mod_map(p(0), p(1), params);
            p = point(z, w);
        }
        if (!finite(p)) {
            tr.status = OrbitStatus::NonFinite;
            tr.status_step = k;
            return tr;
        }
        tr.points.push_back(p);
        if (maxabs(p) > escape_radius) {
            tr.status = OrbitStatus::Escaped;
            tr.status_step = k;
            return tr;
        }
    }
    return tr;
}

double dominant_frequency(const Eigen::VectorXcd& signal) {
    const Eigen::Index n = signal.size();
    if (n < 4) throw NumericalError("TooShort", "dominant_frequency: fewer than 4 samples");
    const cplx mean = signal.mean();
    Eigen::VectorXcd f(n);
    for (Eigen::Index k = 0; k < n; ++k)
        f(k) = (signal(k) - mean) * (0.5 - 0.5 * std::cos(2.0 * pi * double(k) / double(n)));

    auto amp = [&](double nu) {
        const cplx step = std::polar(1.0, -2.0 * pi * nu);
        cplx ph = 1.0, acc = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
            acc += f(k) * ph;
            ph *= step;
        }
        return std::abs(acc);
    };

    Eigen::Index grid = 1;
    while (grid < 4 * n) grid *= 2;
    std::vector<cplx> padded(grid, cplx(0.0)), spec;
    for (Eigen::Index k = 0; k < n; ++k) padded[k] = f(k);
    Eigen::FFT<double> fft;
    fft.fwd(spec, padded);
    Eigen::Index imax = 0;
    for (Eigen::Index i = 1; i < grid; ++i)
        if (std::abs(spec[i]) > std::abs(spec[imax])) imax = i;
    double nu0 = double(imax) / double(grid);
    if (nu0 >= 0.5) nu0 -= 1.0;
    // golden-section on the bracketing cell
    double a = nu0 - 1.0 / double(grid), b = nu0 + 1.0 / double(grid);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = amp(x1), f2 = amp(x2);
    for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
        if (f1 > f2) {
            b = x2, x2 = x1, f2 = f1;
            x1 = b - gr * (b - a), f1 = amp(x1);
        } else {
            a = x1, x1 = x2, f1 = f2;
            x2 = a + gr * (b - a), f2 = amp(x2);
        }
    }
    return 0.5 * (a + b);
}

namespace {

double seg_dist(const PlanarPoint& p, const PlanarPoint& a, const PlanarPoint& b) {
    const PlanarPoint d = b - a;
    const double dd = d.squaredNorm();
    double t = dd > 0 ? std::real(d.dot(p - a)) / dd : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (p - a - t * d).norm();
}

double mean_of(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    return std::accumulate(v.begin() + lo, v.begin() + hi, 0.0) / double(hi - lo);
}

}  // namespace

OrbitClass classify_orbit(const OrbitTrace& trace, int symmetry_order) {
    if (symmetry_order < 1) throw std::invalid_argument("classify_orbit: symmetry_order >= 1");
    std::vector<PlanarPoint> pts;
    for (const auto& p : trace.points) {
        if (maxabs(p) > trace.escape_radius) break;
        pts.push_back(p);
    }
    if (pts.size() < 500)
        throw NumericalError("TooShort", "classify_orbit: fewer than 500 bounded points");

    const int m = symmetry_order;
    std::vector<PlanarPoint> q;
    for (std::size_t i = 0; i < pts.size(); i += m) q.push_back(pts[i]);
    Eigen::VectorXcd sig(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) sig(i) = q[i](1);

    OrbitClass out;
    const double nu = dominant_frequency(sig);
    out.rotation_estimate = nu / m;
    out.attraction_gap = std::nan("");
    out.attraction_decrease = std::nan("");

    const double K = nu != 0.0 ? 1.0 / std::abs(nu) : INFINITY;
    out.revolution_length = K * m;
    const auto lo = static_cast<std::size_t>(std::floor(0.75 * K));
    const double hid = std::ceil(1.25 * K);
    if (!std::isfinite(hid) || hid + 2 >= double(q.size())) return out;
    const auto hi = static_cast<std::size_t>(hid);

    const std::size_t stride = std::max<std::size_t>(1, (hi - lo) / 64);
    std::vector<double> gaps;
    for (std::size_t n = 0; n + hi + 1 < q.size(); ++n) {
        double g = INFINITY;
        const std::size_t first = std::max<std::size_t>(lo, 1);
        std::size_t jbest = first;
        for (std::size_t j = first; j <= hi; j += stride) {
            const double d = (q[n] - q[n + j]).norm();
            if (d < g) g = d, jbest = j;
        }
        const std::size_t from = jbest > first + stride ? jbest - stride : first;
        for (std::size_t j = from; j <= std::min(hi, jbest + stride); ++j)
            g = std::min(g, seg_dist(q[n], q[n + j], q[n + j + 1]));
        gaps.push_back(g);
    }
    if (gaps.size() < 3) return out;

    out.attraction_gap = mean_of(gaps, 0, gaps.size());
    const std::size_t third = gaps.size() / 3;
    out.attraction_decrease =
        1.0 - mean_of(gaps, gaps.size() - third, gaps.size()) / mean_of(gaps, 0, third);

    const auto per_rev = std::max<std::size_t>(1, static_cast<std::size_t>(std::round(K)));
    for (std::size_t r = 0; r * per_rev < gaps.size(); ++r)
        out.gap_series.push_back(mean_of(gaps, r * per_rev, std::min(gaps.size(), (r + 1) * per_rev)));

    std::size_t close = 0;
    for (std::size_t n = 0; n < gaps.size(); ++n)
        if (gaps[n] <= 2.0 * (q[n + 1] - q[n]).norm()) ++close;
    out.closed_curve_score = double(close) / double(gaps.size());
    return out;
}

}  // namespace hr
