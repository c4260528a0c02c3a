#include "henon_rings/search.hpp"

#include <cmath>

#include "henon_rings/bnf.hpp"

namespace hr {

std::string to_string(SearchTarget t) { return t == SearchTarget::Exotic ? "Exotic" : "Herman"; }

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::CandidateFound: return "CandidateFound";
        case Verdict::Inconclusive: return "Inconclusive";
        case Verdict::Failed: return "Failed";
    }
    return "";
}

PlanarPoint bnf_to_mod(const PlanarPoint& ab, const Params& p) {
    const cplx s = pi * std::sqrt(3.0) * p.mbeta * p.delta;
    const cplx z = s * ab(0), w = principal_pow(s, 2.0 / 3.0) * ab(1);
    const CJet Y = resonant_bnf(p, 3, 4).generator_jets.at(0);
    return point(z + Y.dw().eval(z, w), w - Y.dz().eval(z, w));
}

FourierOrbit orbit_at(cplx tau, int N) {
    FourierOrbit o = reference_orbit(N);
    const cplx from = o.tau;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(tau - from) / 0.1)));
    for (int s = 1; s <= steps; ++s) {
        o.tau = from + (tau - from) * (double(s) / steps);
        o = newton_solve(o, {1e-12, 12});
    }
    return o;
}

namespace {

TraceSummary summarize(const OrbitTrace& t, bool with_gap) {
    TraceSummary s;
    s.status = t.status;
    s.status_step = t.status_step;
    s.n_steps = t.n_steps;
    if (t.status == OrbitStatus::Bounded && t.points.size() >= 500) {
        const OrbitClass c = classify_orbit(t, 3);
        s.rotation_estimate = c.rotation_estimate;
        if (with_gap && std::isfinite(c.attraction_decrease)) s.attraction_decrease = c.attraction_decrease;
    }
    return s;
}

void run_chain(SearchReport& r, int n_iters, bool with_gap) {
    const FourierOrbit unhat = to_convention(r.orbit, Convention::Unhat);
    const PlanarPoint ab = evaluate(unhat, 0.0);
    r.mod_seed = bnf_to_mod(ab, r.params);
    r.seed_hint = mod_to_henon(r.mod_seed, r.params);
    r.omega = r.params.mbeta * r.orbit.g;
    r.im_g_residual = std::abs(r.omega.imag());

    const OrbitTrace mod = iterate(r.mod_seed, MapKind::HenonMod, r.params, n_iters, 10.0);
    r.mod_trace_summary = summarize(mod, with_gap);
    r.trace = iterate(r.seed_hint, MapKind::Henon, r.params, n_iters, 10.0);
    r.henon_trace_summary = summarize(r.trace, with_gap);
    r.trace.rotation_estimate = r.henon_trace_summary.rotation_estimate;
    if (r.henon_trace_summary.attraction_decrease) {
        const OrbitClass c = classify_orbit(r.trace, 3);
        r.trace.attraction_gap = c.attraction_gap;
    }
}

}  // namespace

SearchReport find_exotic(double mbeta, cplx tau, double delta, int n_iters) {
    SearchReport r;
    r.target = SearchTarget::Exotic;
    if (!(delta > 0)) {
        r.verdict = Verdict::Failed;
        r.reason = "delta must be positive";
        return r;
    }
    if (n_iters < 1) throw std::invalid_argument("find_exotic: n_iters >= 1");
    r.params = params_from_resonant(tau, mbeta, delta);
    r.orbit = orbit_at(tau);
    run_chain(r, n_iters, false);
    if (r.henon_trace_summary.status == OrbitStatus::Bounded) {
        r.verdict = Verdict::CandidateFound;
    } else {
        r.verdict = Verdict::Inconclusive;
        r.reason = "orbit " + to_string(r.henon_trace_summary.status) + " at step " +
                   std::to_string(r.henon_trace_summary.status_step);
    }
    return r;
}

SearchReport find_herman(double mbeta0, double phi, double delta, cplx tau_guess, int n_iters) {
    SearchReport r;
    r.target = SearchTarget::Herman;
    if (!(delta > 0)) {
        r.verdict = Verdict::Failed;
        r.reason = "delta must be positive";
        return r;
    }
    if (n_iters < 1) throw std::invalid_argument("find_herman: n_iters >= 1");
    const cplx rot = std::polar(1.0, phi);
    const cplx mbeta = mbeta0 * rot;
    const double re_tau = tau_guess.real();
    const double h = 1e-4;

    FourierOrbit o = orbit_at(tau_guess);
    auto solve_at = [&](double im_tau, const FourierOrbit& start) {
        FourierOrbit s = start;
        s.tau = cplx(re_tau, im_tau);
        return newton_solve(s, {1e-12, 12});
    };
    auto F = [&](const FourierOrbit& s) { return std::imag(rot * s.g); };

    double y = tau_guess.imag();
    double f = F(o);
    r.outer_residuals.push_back(std::abs(f));
    for (int it = 0; it < 20 && std::abs(f) >= 1e-10; ++it) {
        const double df = (F(solve_at(y + h, o)) - F(solve_at(y - h, o))) / (2.0 * h);
        if (df == 0.0 || !std::isfinite(df))
            throw NumericalError("NoConvergence", "find_herman: vanishing derivative of Im(e^{iφ}g)");
        y -= f / df;
        o = solve_at(y, o);
        f = F(o);
        r.outer_residuals.push_back(std::abs(f));
        r.outer_iterations = it + 1;
    }
    if (!(std::abs(f) < 1e-10))
        throw NumericalError("NoConvergence", "find_herman: outer Newton stalled at |Im(e^{iφ}g)| = " +
                                                  std::to_string(std::abs(f)));

    r.orbit = o;
    r.params = params_from_resonant(o.tau, mbeta, delta);
    run_chain(r, n_iters, true);
    const auto& s = r.henon_trace_summary;
    if (s.status != OrbitStatus::Bounded) {
        r.verdict = Verdict::Inconclusive;
        r.reason = "orbit " + to_string(s.status) + " at step " + std::to_string(s.status_step);
    } else if (!s.attraction_decrease || *s.attraction_decrease < 0.2) {
        r.verdict = Verdict::Inconclusive;
        r.reason = "bounded orbit without attraction toward an invariant curve";
    } else {
        r.verdict = Verdict::CandidateFound;
    }
    return r;
}

}  // namespace hr
