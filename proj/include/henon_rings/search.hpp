#pragma once

#include <string>

#include "henon_rings/henon.hpp"
#include "henon_rings/spectral.hpp"

namespace hr {

enum class SearchTarget { Exotic, Herman };
enum class Verdict { CandidateFound, Inconclusive, Failed };

std::string to_string(SearchTarget t);
std::string to_string(Verdict v);

struct TraceSummary {
    OrbitStatus status = OrbitStatus::Bounded;
    int status_step = -1;
    int n_steps = 0;
    std::optional<double> rotation_estimate;
    std::optional<double> attraction_decrease;
};

struct SearchReport {
    SearchTarget target = SearchTarget::Exotic;
    Params params;
    FourierOrbit orbit;
    PlanarPoint seed_hint = PlanarPoint::Zero();  // Hénon coordinates
    PlanarPoint mod_seed = PlanarPoint::Zero();   // h^mod coordinates
    double im_g_residual = 0.0;                   // |Im(β̊·g)|
    cplx omega;                                   // β̊·g
    int outer_iterations = 0;
    std::vector<double> outer_residuals;
    TraceSummary henon_trace_summary;
    TraceSummary mod_trace_summary;
    OrbitTrace trace;  // the Hénon trace
    Verdict verdict = Verdict::Inconclusive;
    std::string reason;
};

// BNF point (a, b) of the periodic orbit → h^mod coordinates:
// Φ_Y(s·a, s^{2/3}·b), s = π√3·β̊·δ, Y the cubic generator of the resonant BNF at these parameters
PlanarPoint bnf_to_mod(const PlanarPoint& ab, const Params& p);

SearchReport find_exotic(double mbeta, cplx tau, double delta, int n_iters = 5000);

// β̊ = mbeta0·e^{iφ}; τ keeps Re τ_guess and Im τ is tuned until Im(e^{iφ}g(τ)) = 0
SearchReport find_herman(double mbeta0, double phi, double delta, cplx tau_guess, int n_iters = 20000);

// the orbit solved at τ, continued from the τ = 1 reference in steps of at most 0.1
FourierOrbit orbit_at(cplx tau, int N = 12);

}  // namespace hr
