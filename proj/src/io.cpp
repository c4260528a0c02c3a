#include "henon_rings/io.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#ifndef HENON_RINGS_DATA_DIR
#define HENON_RINGS_DATA_DIR "data"
#endif

namespace hr {

namespace {

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
    return j.at(key);
}

double number(const json& j, const char* what) {
    if (!j.is_number()) throw SchemaError(std::string("'") + what + "' must be a number");
    return j.get<double>();
}

int integer(const json& j, const char* what) {
    if (!j.is_number_integer()) throw SchemaError(std::string("'") + what + "' must be an integer");
    return j.get<int>();
}

json coeff_table(const Eigen::VectorXcd& c, int N, int offset = 0) {
    json a = json::array();
    for (int k = -N; k <= N; ++k) a.push_back({k + offset, c(k + N).real(), c(k + N).imag()});
    return a;
}

Eigen::VectorXcd coeff_from_table(const json& a, int N, const char* what) {
    if (!a.is_array()) throw SchemaError(std::string("'") + what + "' must be an array");
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * N + 1);
    for (const json& e : a) {
        if (!e.is_array() || e.size() != 3) throw SchemaError(std::string("'") + what + "' entries are [k, re, im]");
        const int k = integer(e[0], what);
        if (std::abs(k) > N) throw SchemaError(std::string("'") + what + "' index beyond N");
        c(k + N) = cplx(number(e[1], what), number(e[2], what));
    }
    return c;
}

Eigen::Matrix2cd matrix_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2) throw SchemaError(std::string("'") + what + "' must be a 2x2 matrix");
    Eigen::Matrix2cd m;
    for (int r = 0; r < 2; ++r) {
        if (!j[r].is_array() || j[r].size() != 2) throw SchemaError(std::string("'") + what + "' must be a 2x2 matrix");
        for (int c = 0; c < 2; ++c) m(r, c) = cplx_from_json(j[r][c]);
    }
    return m;
}

json matrix_json(const Eigen::Matrix2cd& m) {
    return json::array({json::array({to_json(m(0, 0)), to_json(m(0, 1))}),
                        json::array({to_json(m(1, 0)), to_json(m(1, 1))})});
}

}  // namespace

json to_json(cplx v) { return {{"re", v.real()}, {"im", v.imag()}}; }

cplx cplx_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    return {number(field(j, "re"), "re"), number(field(j, "im"), "im")};
}

json to_json(const PlanarPoint& p) { return {{"z", to_json(p(0))}, {"w", to_json(p(1))}}; }

PlanarPoint point_from_json(const json& j) { return point(cplx_from_json(field(j, "z")), cplx_from_json(field(j, "w"))); }

json to_json(const Params& p) {
    return {{"tau", to_json(p.tau)},         {"mbeta", to_json(p.mbeta)},     {"delta", p.delta},
            {"alpha", to_json(p.alpha)},     {"beta", to_json(p.beta)},       {"c", to_json(p.c)},
            {"lambda1", to_json(p.lambda1)}, {"lambda2", to_json(p.lambda2)}, {"t_plus", to_json(p.t_plus)},
            {"t_minus", to_json(p.t_minus)}};
}

Params params_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("params must be an object");
    if (j.contains("alpha") && j.contains("lambda1")) {
        Params p;
        p.tau = cplx_from_json(field(j, "tau"));
        p.mbeta = cplx_from_json(field(j, "mbeta"));
        p.delta = number(field(j, "delta"), "delta");
        p.alpha = cplx_from_json(field(j, "alpha"));
        p.beta = cplx_from_json(field(j, "beta"));
        p.c = cplx_from_json(field(j, "c"));
        p.lambda1 = cplx_from_json(field(j, "lambda1"));
        p.lambda2 = cplx_from_json(field(j, "lambda2"));
        p.t_plus = cplx_from_json(field(j, "t_plus"));
        p.t_minus = cplx_from_json(field(j, "t_minus"));
        return p;
    }
    if (j.contains("beta") && j.contains("c"))
        return params_from_beta_c(cplx_from_json(j.at("beta")), cplx_from_json(j.at("c")));
    if (j.contains("tau") && j.contains("mbeta") && j.contains("delta"))
        return params_from_resonant(cplx_from_json(j.at("tau")), cplx_from_json(j.at("mbeta")),
                                    number(j.at("delta"), "delta"));
    throw SchemaError("params need {beta, c} or {tau, mbeta, delta}");
}

json to_json(const CJet& jet) {
    json a = json::array();
    for (int k = 0; k <= jet.max_degree(); ++k)
        for (int l = 0; k + l <= jet.max_degree(); ++l)
            a.push_back({{"k", k}, {"l", l}, {"re", jet(k, l).real()}, {"im", jet(k, l).imag()}});
    return a;
}

CJet jet_from_json(const json& j) {
    if (!j.is_array()) throw SchemaError("jet must be an array of {k, l, re, im}");
    int d = 0;
    for (const json& e : j) {
        const int k = integer(field(e, "k"), "k"), l = integer(field(e, "l"), "l");
        if (k < 0 || l < 0) throw SchemaError("jet exponents must be non-negative");
        d = std::max(d, k + l);
    }
    CJet jet(d);
    for (const json& e : j)
        jet(e.at("k").get<int>(), e.at("l").get<int>()) =
            cplx(number(field(e, "re"), "re"), number(field(e, "im"), "im"));
    return jet;
}

json to_json(const FourierOrbit& o) {
    return {{"N", o.N},
            {"tau", to_json(o.tau)},
            {"w1", to_json(o.w1)},
            {"g", to_json(o.g)},
            {"z", coeff_table(o.z, o.N)},
            {"w", coeff_table(o.w, o.N)},
            {"convention", o.convention == Convention::Hat ? "hat" : "unhat"}};
}

FourierOrbit orbit_from_json(const json& j) {
    const int N = integer(field(j, "N"), "N");
    if (N < 1 || N > 200) throw SchemaError("'N' must lie in [1, 200]");
    const std::string conv = j.value("convention", "hat");
    if (conv != "hat" && conv != "unhat") throw SchemaError("'convention' must be hat or unhat");
    FourierOrbit o(N, cplx_from_json(field(j, "tau")), cplx_from_json(field(j, "w1")),
                   conv == "hat" ? Convention::Hat : Convention::Unhat);
    o.g = cplx_from_json(field(j, "g"));
    o.z = coeff_from_table(field(j, "z"), N, "z");
    o.w = coeff_from_table(field(j, "w"), N, "w");
    return o;
}

json to_json(const FloquetData& d) {
    return {{"N", d.N},
            {"g", to_json(d.g)},
            {"lambda1", to_json(d.lambda1)},
            {"lambda2", to_json(d.lambda2)},
            {"u1", coeff_table(d.u1, d.N)},
            {"v1", coeff_table(d.v1, d.N)},
            {"u2", coeff_table(d.u2, d.N)},
            {"v2", coeff_table(d.v2, d.N)},
            {"P0", matrix_json(d.P0)},
            {"P0_inv", matrix_json(d.P0_inv)},
            {"det_P0", to_json(d.det_P0)},
            {"eig_residuals", {d.eig_residuals.first, d.eig_residuals.second}},
            {"spectrum", [&] {
                 json a = json::array();
                 for (const cplx& e : d.spectrum) a.push_back(to_json(e));
                 return a;
             }()}};
}

FloquetData floquet_from_json(const json& j) {
    FloquetData d;
    d.N = integer(field(j, "N"), "N");
    if (d.N < 1 || d.N > 200) throw SchemaError("'N' must lie in [1, 200]");
    d.g = cplx_from_json(field(j, "g"));
    d.lambda1 = cplx_from_json(field(j, "lambda1"));
    d.lambda2 = cplx_from_json(field(j, "lambda2"));
    d.u1 = coeff_from_table(field(j, "u1"), d.N, "u1");
    d.v1 = coeff_from_table(field(j, "v1"), d.N, "v1");
    d.u2 = coeff_from_table(field(j, "u2"), d.N, "u2");
    d.v2 = coeff_from_table(field(j, "v2"), d.N, "v2");
    d.P0 = matrix_from_json(field(j, "P0"), "P0");
    d.P0_inv = matrix_from_json(field(j, "P0_inv"), "P0_inv");
    d.det_P0 = cplx_from_json(field(j, "det_P0"));
    const json& ee = field(j, "eig_residuals");
    if (!ee.is_array() || ee.size() != 2) throw SchemaError("'eig_residuals' must be a pair");
    d.eig_residuals = {number(ee[0], "eig_residuals"), number(ee[1], "eig_residuals")};
    const json& sp = field(j, "spectrum");
    if (!sp.is_array()) throw SchemaError("'spectrum' must be an array");
    d.spectrum.resize(Eigen::Index(sp.size()));
    for (std::size_t i = 0; i < sp.size(); ++i) d.spectrum(Eigen::Index(i)) = cplx_from_json(sp[i]);
    return d;
}

json to_json(const DerivedQuantities& q) {
    json dc = json::array();
    const int N2 = int(q.det_coeffs.size() - 1) / 2;
    for (int k = -N2; k <= N2; ++k) dc.push_back({3 * k + 1, q.det_coeffs(k + N2).real(), q.det_coeffs(k + N2).imag()});
    return {{"Xhat_p0", {to_json(q.Xhat_p0(0)), to_json(q.Xhat_p0(1))}},
            {"Px0", {to_json(q.Px0(0)), to_json(q.Px0(1))}},
            {"mu_tilde", {to_json(q.mu_tilde(0)), to_json(q.mu_tilde(1))}},
            {"det_coeffs", dc},
            {"det_floor", q.det_floor},
            {"l1_of_P", {{q.l1_of_P(0, 0), q.l1_of_P(0, 1)}, {q.l1_of_P(1, 0), q.l1_of_P(1, 1)}}},
            {"opnorm_bound", q.opnorm_bound}};
}

json to_json(const TraceSummary& s) {
    json j = {{"status", to_string(s.status)}, {"status_step", s.status_step}, {"n_steps", s.n_steps}};
    j["rotation_estimate"] = s.rotation_estimate ? json(*s.rotation_estimate) : json(nullptr);
    j["attraction_decrease"] = s.attraction_decrease ? json(*s.attraction_decrease) : json(nullptr);
    return j;
}

json to_json(const SearchReport& r) {
    json j = {{"target", to_string(r.target)},
              {"verdict", to_string(r.verdict)},
              {"reason", r.reason},
              {"params", to_json(r.params)},
              {"seed_hint", to_json(r.seed_hint)},
              {"mod_seed", to_json(r.mod_seed)},
              {"omega", to_json(r.omega)},
              {"im_g_residual", r.im_g_residual},
              {"outer_iterations", r.outer_iterations},
              {"outer_residuals", r.outer_residuals},
              {"henon_trace_summary", to_json(r.henon_trace_summary)},
              {"mod_trace_summary", to_json(r.mod_trace_summary)}};
    j["orbit"] = r.orbit.N > 0 ? to_json(r.orbit) : json(nullptr);
    return j;
}

json trace_metadata(const OrbitTrace& t) {
    json j = {{"schema_version", schema_version},
              {"params", to_json(t.params)},
              {"seed", to_json(t.seed)},
              {"map", to_string(t.map)},
              {"n_steps", t.n_steps},
              {"status", to_string(t.status)},
              {"status_step", t.status_step},
              {"escape_radius", t.escape_radius},
              {"points", t.points.size()}};
    j["rotation_estimate"] = t.rotation_estimate ? json(*t.rotation_estimate) : json(nullptr);
    j["attraction_gap"] = t.attraction_gap ? json(*t.attraction_gap) : json(nullptr);
    return j;
}

std::string trace_csv(const OrbitTrace& t) {
    std::ostringstream os;
    os.precision(17);
    os << "step,re_z,im_z,re_w,im_w\n";
    for (std::size_t i = 0; i < t.points.size(); ++i) {
        const PlanarPoint& p = t.points[i];
        os << i << ',' << p(0).real() << ',' << p(0).imag() << ',' << p(1).real() << ',' << p(1).imag() << '\n';
    }
    return os.str();
}

void write_trace(const std::string& path, const OrbitTrace& t) {
    std::ofstream csv(path);
    if (!csv) throw std::runtime_error("cannot write " + path);
    csv << trace_csv(t);
    std::ofstream meta(path + ".json");
    if (!meta) throw std::runtime_error("cannot write " + path + ".json");
    meta << trace_metadata(t).dump(2) << '\n';
}

json error_json(const std::string& kind, const std::string& message) {
    return {{"schema_version", schema_version}, {"error", {{"kind", kind}, {"message", message}}}};
}

std::string presets_path() {
    if (const char* env = std::getenv("HENON_RINGS_PRESETS"); env && *env) return env;
    return std::string(HENON_RINGS_DATA_DIR) + "/presets.json";
}

json load_presets_json() {
    const std::string path = presets_path();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read presets file " + path);
    return json::parse(in);
}

Preset find_preset(const std::string& name) {
    const json all = load_presets_json();
    for (const json& e : field(all, "presets")) {
        if (e.value("name", "") != name) continue;
        Preset p;
        p.name = name;
        p.map = map_kind_from_string(e.value("map", "Henon"));
        p.seed = point_from_json(field(e, "seed"));
        p.n = integer(field(e, "n"), "n");
        p.params = params_from_json(e);
        return p;
    }
    throw SchemaError("unknown preset '" + name + "'");
}

}  // namespace hr
