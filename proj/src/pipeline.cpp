#include "henon_rings/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <regex>
#include <sstream>

namespace hr {

namespace {

cplx get_cplx(const json& j, const char* key, cplx fallback) {
    return j.contains(key) ? cplx_from_json(j.at(key)) : fallback;
}

int get_int(const json& j, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer()) throw SchemaError(std::string("'") + key + "' must be an integer");
    return j.at(key).get<int>();
}

double get_double(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw SchemaError(std::string("'") + key + "' must be a number");
    return j.at(key).get<double>();
}

double require_double(const json& j, const char* key) {
    if (!j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
    return get_double(j, key, 0.0);
}

void require_object(const json& j) {
    if (!j.is_object()) throw SchemaError("request body must be a JSON object");
}

}  // namespace

SolveRequest solve_request_from_json(const json& j) {
    require_object(j);
    SolveRequest r;
    r.tau = get_cplx(j, "tau", r.tau);
    r.w1 = get_cplx(j, "w1", r.w1);
    r.N = get_int(j, "N", r.N);
    if (r.N < 1 || r.N > 60) throw SchemaError("'N' must lie in [1, 60]");
    const std::string guess = j.value("guess", "coarse");
    if (guess != "coarse" && guess != "fine") throw SchemaError("'guess' must be coarse or fine");
    r.guess = guess == "fine" ? GuessLevel::Fine : GuessLevel::Coarse;
    r.newton.tol = get_double(j, "tol", r.newton.tol);
    r.newton.max_iter = get_int(j, "max_iter", r.newton.max_iter);
    if (r.newton.max_iter < 1 || r.newton.max_iter > 100) throw SchemaError("'max_iter' must lie in [1, 100]");
    return r;
}

json solve_response(const SolveRequest& req) {
    NewtonTrace trace;
    FourierOrbit guess = initial_guess(req.tau, req.w1, req.guess, req.N);
    if (std::abs(req.tau - 1.0) > 0.1) {
        FourierOrbit o = orbit_at(req.tau, req.N);
        o.w1 = req.w1;
        guess = o;
    }
    const FourierOrbit o = newton_solve(guess, req.newton, &trace);
    return {{"schema_version", schema_version},
            {"orbit", to_json(o)},
            {"residual_l1", residual(o).l1},
            {"tail_residual", tail_residual(o, 2 * o.N)},
            {"newton_residuals", trace.residual_l1}};
}

json floquet_response(const FourierOrbit& orbit) {
    const FloquetData d = floquet_eigensolve(orbit);
    json j = {{"schema_version", schema_version}, {"floquet", to_json(d)}};
    try {
        j["derived"] = to_json(derived_quantities(d, orbit));
    } catch (const NumericalError& e) {
        j["derived"] = nullptr;
        j["derived_error"] = {{"kind", e.kind()}, {"message", e.what()}};
    }
    j["liouville_defect"] = liouville_defect(d);
    return j;
}

IterateRequest iterate_request_from_json(const json& j) {
    require_object(j);
    IterateRequest r;
    bool have_params = false, have_seed = false;
    if (j.contains("preset")) {
        if (!j.at("preset").is_string()) throw SchemaError("'preset' must be a string");
        const Preset p = find_preset(j.at("preset").get<std::string>());
        r.map = p.map;
        r.params = p.params;
        r.seed = p.seed;
        r.n = p.n;
        have_params = have_seed = true;
    }
    if (j.contains("map")) {
        if (!j.at("map").is_string()) throw SchemaError("'map' must be a string");
        try {
            r.map = map_kind_from_string(j.at("map").get<std::string>());
        } catch (const std::exception&) {
            throw SchemaError("'map' must be Henon or HenonMod");
        }
    }
    if (j.contains("params")) r.params = params_from_json(j.at("params")), have_params = true;
    if (j.contains("seed")) r.seed = point_from_json(j.at("seed")), have_seed = true;
    if (!have_params || !have_seed) throw SchemaError("iterate needs a preset or both params and seed");
    r.n = get_int(j, "n", r.n);
    if (r.n < 1 || r.n > 10000000) throw SchemaError("'n' must lie in [1, 1e7]");
    r.escape_radius = get_double(j, "escape_radius", r.escape_radius);
    if (!(r.escape_radius > 0)) throw SchemaError("'escape_radius' must be positive");
    r.symmetry_order = get_int(j, "symmetry_order", r.symmetry_order);
    if (r.symmetry_order < 1) throw SchemaError("'symmetry_order' must be >= 1");
    return r;
}

OrbitTrace run_iterate(const IterateRequest& req) {
    return iterate(req.seed, req.map, req.params, req.n, req.escape_radius);
}

json iterate_summary(const OrbitTrace& t, int symmetry_order) {
    json j = trace_metadata(t);
    if (t.status == OrbitStatus::Bounded && t.points.size() >= 500) {
        const OrbitClass c = classify_orbit(t, symmetry_order);
        j["rotation_estimate"] = c.rotation_estimate;
        j["attraction_gap"] = std::isfinite(c.attraction_gap) ? json(c.attraction_gap) : json(nullptr);
        j["attraction_decrease"] =
            std::isfinite(c.attraction_decrease) ? json(c.attraction_decrease) : json(nullptr);
        j["closed_curve_score"] = c.closed_curve_score;
    }
    return j;
}

json exotic_response(const json& req) {
    require_object(req);
    const SearchReport r = find_exotic(require_double(req, "mbeta"), get_cplx(req, "tau", 1.0),
                                       require_double(req, "delta"), get_int(req, "n_iters", 5000));
    return {{"schema_version", schema_version}, {"report", to_json(r)}};
}

json herman_response(const json& req) {
    require_object(req);
    if (!req.contains("tau_guess")) throw SchemaError("missing field 'tau_guess'");
    const SearchReport r =
        find_herman(require_double(req, "mbeta0"), require_double(req, "phi"), require_double(req, "delta"),
                    cplx_from_json(req.at("tau_guess")), get_int(req, "n_iters", 20000));
    return {{"schema_version", schema_version}, {"report", to_json(r)}};
}

std::vector<Check> appendix_checks() {
    std::vector<Check> out;
    auto add = [&](std::string name, double value, double expected, double tol) {
        out.push_back({std::move(name), value, expected, tol, std::abs(value - expected) <= tol, '='});
    };
    auto below = [&](std::string name, double value, double bound) {
        out.push_back({std::move(name), value, bound, 0.0, value < bound, '<'});
    };
    auto above = [&](std::string name, double value, double bound) {
        out.push_back({std::move(name), value, bound, 0.0, value > bound, '>'});
    };

    const FourierOrbit o = reference_orbit(12);
    add("g", o.g.real(), -0.8345538969681955, 1e-9);
    add("zhat_0", o.zc(0).real(), 0.8345538969681958, 1e-8);
    add("z_-3", o.zc(-1).real(), -1.1509120242609674, 1e-8);
    add("w_-2", o.wc(-1).real(), 0.6229635928580461, 1e-8);
    add("l1(zhat)", coefficient_l1(o.z), 2.495127140332043, 1e-8);
    add("l1(w)", coefficient_l1(o.w), 2.3543381748256222, 1e-8);
    below("tail residual N'=24", tail_residual(o, 24), 1e-7);

    const FloquetData d = floquet_eigensolve(o);
    add("lambda2", d.lambda2.real(), 1.8345538969682487, 1e-8);
    below("|lambda1|", std::abs(d.lambda1), 1e-6);
    add("det P(0)", d.det_P0.real(), 0.307353166302905, 1e-6);
    add("P(0)[0][0]", d.P0(0, 0).real(), 1.0624711709108121, 1e-6);
    add("P(0)[0][1]", d.P0(0, 1).real(), 1.2460400371648754, 1e-6);
    add("P(0)[1][0]", d.P0(1, 0).real(), 0.07675705954779727, 1e-6);
    add("P(0)[1][1]", d.P0(1, 1).real(), 0.37930020754260807, 1e-6);
    add("v2 at harmonic 1", d.v2(d.N).real(), -0.237538786, 1e-6);
    const auto [ee1, ee2] = resolvent_residual(d, o, 24);
    below("ee1 N'=24", ee1, 1e-6);
    below("ee2 N'=24", ee2, 1e-6);

    const DerivedQuantities q = derived_quantities(d, o);
    add("Px0[0]", q.Px0(0).real(), -3.50973099, 1e-3);
    add("|Px0[1]|", std::abs(q.Px0(1)), 0.0, 1e-5);
    below("operator-norm bound", q.opnorm_bound, 2.7);
    above("det_floor", q.det_floor, 0.30);

    const FourierOrbit o7 = newton_solve(embed(o, 7));
    const FloquetData d7 = floquet_eigensolve(o7);
    const DerivedQuantities q7 = derived_quantities(d7, o7);
    add("Xhat(p(0))[0] N=7", q7.Xhat_p0(0).real(), -3.728971421315655, 1e-6);
    add("Xhat(p(0))[1] N=7", q7.Xhat_p0(1).real(), -0.26938912797026227, 1e-6);

    const FourierOrbit o17 = newton_solve(embed(o, 17));
    const FloquetData d17 = floquet_eigensolve(o17);
    below("ee1 N=17", resolvent_residual(d17, o17, 34).first, 1e-9);
    return out;
}

std::string format_checks(const std::vector<Check>& checks) {
    std::ostringstream os;
    char line[256];
    for (const Check& c : checks) {
        if (c.relation == '=')
            std::snprintf(line, sizeof line, "%-4s %-24s %.17g (expected %.17g ± %.1e)\n", c.pass ? "PASS" : "FAIL",
                          c.name.c_str(), c.value, c.expected, c.tolerance);
        else
            std::snprintf(line, sizeof line, "%-4s %-24s %.17g (bound %c %.6g)\n", c.pass ? "PASS" : "FAIL",
                          c.name.c_str(), c.value, c.relation, c.expected);
        os << line;
    }
    return os.str();
}

cplx parse_complex(const std::string& s) {
    static const std::regex re(R"(^\s*([-+]?[0-9.eE+-]*[0-9.])\s*(?:,\s*([-+]?[0-9.eE+-]*[0-9.]))?\s*$)");
    std::smatch m;
    if (!std::regex_match(s, m, re)) throw std::invalid_argument("not a complex number: '" + s + "' (use re or re,im)");
    try {
        const double a = std::stod(m[1].str());
        const double b = m[2].matched ? std::stod(m[2].str()) : 0.0;
        return {a, b};
    } catch (const std::exception&) {
        throw std::invalid_argument("not a complex number: '" + s + "'");
    }
}

}  // namespace hr
