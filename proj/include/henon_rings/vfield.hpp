#pragma once

#include <string>
#include <vector>

#include "henon_rings/core.hpp"

namespace hr {

enum class FieldKind { XTau, XHat };
enum class UnitConvention { TwoPi, Absorbed };

// X_τ  = u·((1−τ)z + z²/2 − w³/3, τw − zw)
// X̂_τ̂ = u·(τ̂ + z + z²/2 − w³/3, −zw)
// with u = 2πi (TwoPi) or i (Absorbed); `tau` holds τ or τ̂ according to kind.
struct ModelField {
    FieldKind kind = FieldKind::XTau;
    cplx tau{1.0};
    UnitConvention unit = UnitConvention::TwoPi;

    cplx factor() const { return unit == UnitConvention::TwoPi ? 2.0 * pi * I : I; }
};

inline cplx tau_hat_of(cplx tau) { return tau - tau * tau / 2.0; }

PlanarPoint eval_field(const ModelField& f, const PlanarPoint& p);
Eigen::Matrix2cd field_jacobian(const ModelField& f, const PlanarPoint& p);

struct FlowSample {
    cplx t;
    PlanarPoint p;
};

struct FlowResult {
    std::vector<FlowSample> samples;
    double tolerance_used = 0.0;
    int rejected_steps = 0;
};

// Dormand–Prince 5(4) along the polyline through `path` (complex times).
FlowResult flow(const ModelField& f, const PlanarPoint& seed, const std::vector<cplx>& path,
                double rel_tol = 1e-10);

struct FixedPoint {
    PlanarPoint point;
    Eigen::Vector2cd eigenvalues;
};

// (z±, 0) and (0, jᵏ(3τ̂)^{1/3}), in the coordinates of the field's kind
std::vector<FixedPoint> fixed_points(const ModelField& f);

// (1/2,1/2) + 2.354·(π√3β̊δ)^{2/3}·(j, 1)
PlanarPoint seed_locator(cplx mbeta, double delta);

}  // namespace hr
