#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "henon_rings/params.hpp"

namespace hr {

// Map formulas generic in the scalar, so the same code drives points and jets.
template <class T>
std::array<T, 2> henon_map(const T& x, const T& y, cplx beta, cplx c) {
    const cplx e1 = std::exp(I * pi * beta);
    const cplx e2 = std::exp(2.0 * I * pi * beta);
    return {e1 * (x * x + c) - e2 * y, x};
}

template <class T>
std::array<T, 2> henon_inverse_map(const T& x, const T& y, cplx beta, cplx c) {
    const cplx e1 = std::exp(I * pi * beta);
    const cplx e2inv = std::exp(-2.0 * I * pi * beta);
    return {y, (e1 * (y * y + c) - x) * e2inv};
}

// h^mod(z,w) = (λ₁z, λ₂w) + e^{iπβ}(λ₁z+λ₂w)²/(λ₁−λ₂)·(1,−1)
template <class T>
std::array<T, 2> henon_mod_map(const T& z, const T& w, const Params& p) {
    const cplx k = std::exp(I * pi * p.beta) / (p.lambda1 - p.lambda2);
    const T s = p.lambda1 * z + p.lambda2 * w;
    const T q = k * (s * s);
    return {p.lambda1 * z + q, p.lambda2 * w - q};
}

PlanarPoint henon_step(const PlanarPoint& p, cplx beta, cplx c);
PlanarPoint henon_inverse_step(const PlanarPoint& p, cplx beta, cplx c);
PlanarPoint henon_mod_step(const PlanarPoint& p, const Params& params);

// σ(x,y) = (ȳ, x̄)
PlanarPoint henon_involution(const PlanarPoint& p);

// Hénon coordinates ↔ h^mod coordinates: (x,y) = T_t L⁻¹(z,w)
PlanarPoint mod_to_henon(const PlanarPoint& zw, const Params& params);
PlanarPoint henon_to_mod(const PlanarPoint& xy, const Params& params);

enum class MapKind { Henon, HenonMod };
enum class OrbitStatus { Bounded, Escaped, NonFinite };

std::string to_string(MapKind k);
std::string to_string(OrbitStatus s);
MapKind map_kind_from_string(const std::string& s);
OrbitStatus orbit_status_from_string(const std::string& s);

struct OrbitTrace {
    std::vector<PlanarPoint> points;
    Params params;
    PlanarPoint seed;
    MapKind map = MapKind::Henon;
    int n_steps = 0;
    OrbitStatus status = OrbitStatus::Bounded;
    int status_step = -1;
    double escape_radius = 10.0;
    std::optional<double> rotation_estimate;
    std::optional<double> attraction_gap;
};

OrbitTrace iterate(const PlanarPoint& seed, MapKind map, const Params& params, int n,
                   double escape_radius = 10.0);

struct OrbitClass {
    double rotation_estimate = 0.0;
    double attraction_gap = 0.0;
    double closed_curve_score = 0.0;
    // per-revolution means of the gap, oldest first
    std::vector<double> gap_series;
    // 1 − mean(last third of gaps)/mean(first third)
    double attraction_decrease = 0.0;
    double revolution_length = 0.0;
};

// symmetry_order m: the estimate is the rotation of h^m divided by m
OrbitClass classify_orbit(const OrbitTrace& trace, int symmetry_order = 1);

// refined dominant frequency (cycles per sample) of a complex signal
double dominant_frequency(const Eigen::VectorXcd& signal);

}  // namespace hr
