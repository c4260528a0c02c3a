#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "henon_rings/pipeline.hpp"
#include "henon_rings/service.hpp"

// after Eigen: resolv.h, pulled in here, defines _res
#include "httplib.h"

using namespace hr;
namespace fs = std::filesystem;

namespace {

struct Running {
    Service service;
    int port = -1;
    std::thread thread;

    Running() {
        port = service.bind("127.0.0.1", 0);
        REQUIRE(port > 0);
        thread = std::thread([this] { service.run(); });
        service.wait_until_ready();
    }
    ~Running() {
        service.stop();
        thread.join();
    }
    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port);
        c.set_read_timeout(120, 0);
        return c;
    }
};

Running& server() {
    static Running r;
    return r;
}

httplib::Result post(const std::string& path, const json& body) {
    return server().client().Post(path, body.dump(), "application/json");
}

json body_of(const httplib::Result& r) { return json::parse(r->body); }

fs::path temp_dir() {
    const fs::path d = fs::temp_directory_path() / "henon_rings_tests";
    fs::create_directories(d);
    return d;
}

int run_cli(const std::string& args, const fs::path& out = {}, const fs::path& err = {}) {
    std::string cmd = std::string(HENON_RINGS_CLI) + " " + args;
    cmd += " >" + (out.empty() ? std::string("/dev/null") : out.string());
    cmd += " 2>" + (err.empty() ? std::string("/dev/null") : err.string());
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("JSON round trips") {
    const cplx c(0.1, -1e-300);
    CHECK(cplx_from_json(json::parse(to_json(c).dump())) == c);
    CHECK(cplx_from_json(json(2.5)) == cplx(2.5));

    const PlanarPoint p = point(cplx(1.0 / 3.0, 2.0 / 7.0), cplx(-5e-17, 1e10));
    CHECK(point_from_json(json::parse(to_json(p).dump())) == p);

    const Params pr = params_from_resonant(cplx(0.4, -0.0071), cplx(0.311841, 1e-3 / 3), 1e-3);
    const Params back = params_from_json(json::parse(to_json(pr).dump()));
    CHECK(to_json(back).dump() == to_json(pr).dump());
    CHECK(back.c == pr.c);
    CHECK(back.lambda1 == pr.lambda1);

    CJet jet(6);
    jet(2, 1) = cplx(1.0 / 3.0, 0.1);
    jet(0, 4) = cplx(-2.0, 1e-20);
    CHECK(jet_from_json(json::parse(to_json(jet).dump())).coeffs() == jet.coeffs());

    const FourierOrbit o = reference_orbit(12);
    const FourierOrbit ob = orbit_from_json(json::parse(to_json(o).dump()));
    CHECK(ob.z == o.z);
    CHECK(ob.w == o.w);
    CHECK(ob.g == o.g);
    CHECK(ob.N == o.N);
    CHECK(ob.convention == o.convention);
    CHECK(to_json(ob).dump() == to_json(o).dump());
    const FourierOrbit ou = to_convention(o, Convention::Unhat);
    CHECK(orbit_from_json(to_json(ou)).convention == Convention::Unhat);

    const FloquetData d = floquet_eigensolve(o);
    const FloquetData db = floquet_from_json(json::parse(to_json(d).dump()));
    CHECK(db.P0 == d.P0);
    CHECK(db.u2 == d.u2);
    CHECK(db.lambda2 == d.lambda2);
    CHECK(to_json(db).dump() == to_json(d).dump());
}

TEST_CASE("malformed documents") {
    CHECK_THROWS_AS(cplx_from_json(json("x")), SchemaError);
    CHECK_THROWS_AS(params_from_json(json::object()), SchemaError);
    CHECK_THROWS_AS(orbit_from_json(json{{"N", 3}}), std::invalid_argument);
    CHECK_THROWS_AS(solve_request_from_json(json{{"N", 0}}), std::invalid_argument);
    CHECK_THROWS_AS(find_preset("nope"), std::invalid_argument);
}

TEST_CASE("presets") {
    const json all = load_presets_json();
    CHECK(all["schema_version"] == 1);
    const Preset f7 = find_preset("fig7");
    CHECK(f7.params.beta == cplx(0.3289999, 0.0043333));
    CHECK(f7.params.c == cplx(0.2619897, -0.0088858));
    CHECK(f7.seed(0) == cplx(0.44672099, -0.16062292));
    const Preset f1 = find_preset("fig1");
    CHECK(f1.params.beta == cplx(0.327136));
    CHECK(f1.params.c == cplx(0.269343));
    const Preset f8 = find_preset("fig8");
    CHECK(f8.params.beta == cplx(0.33121126, 0.00218737));
    CHECK(f8.n == 7000);
    const Preset f6 = find_preset("fig6");
    CHECK(f6.map == MapKind::HenonMod);
    CHECK(f6.params.delta == 1e-3);
}

TEST_CASE("HENON_RINGS_PRESETS overrides the preset file") {
    const fs::path p = temp_dir() / "presets.json";
    std::ofstream(p) << R"({"schema_version": 1, "presets": [{"name": "mine", "map": "Henon",
        "beta": {"re": 0.3, "im": 0}, "c": {"re": 0.2, "im": 0},
        "seed": {"z": {"re": 0.1, "im": 0}, "w": {"re": 0.1, "im": 0}}, "n": 10}]})";
    setenv("HENON_RINGS_PRESETS", p.c_str(), 1);
    CHECK(presets_path() == p.string());
    CHECK(find_preset("mine").n == 10);
    CHECK_THROWS(find_preset("fig7"));
    unsetenv("HENON_RINGS_PRESETS");
    CHECK(find_preset("fig7").n == 5000);
}

TEST_CASE("GET /api/presets") {
    auto r = server().client().Get("/api/presets");
    REQUIRE(r);
    CHECK(r->status == 200);
    const json j = body_of(r);
    CHECK(j["schema_version"] == 1);
    CHECK(j["presets"] == load_presets_json()["presets"]);
}

TEST_CASE("POST /api/solve") {
    auto r = post("/api/solve", {{"tau", 1.0}, {"w1", 1.4}, {"N", 12}});
    REQUIRE(r);
    CHECK(r->status == 200);
    const json j = body_of(r);
    CHECK(j["schema_version"] == 1);
    CHECK(j.contains("job_id"));
    CHECK(std::abs(j["orbit"]["g"]["re"].get<double>() - (-0.8345538969681955)) < 1e-9);
    CHECK(j["residual_l1"].get<double>() < 1e-12);
}

TEST_CASE("schema violations are 400") {
    for (const auto& [path, body] : std::vector<std::pair<std::string, std::string>>{
             {"/api/solve", "{not json"},
             {"/api/solve", R"({"N": "twelve"})"},
             {"/api/solve", R"({"N": 0})"},
             {"/api/floquet", "[]"},
             {"/api/iterate", R"({"preset": "nope"})"},
             {"/api/iterate", R"({"preset": "fig7", "n": 0})"},
             {"/api/search/exotic", R"({"mbeta": 1})"},
             {"/api/search/herman", R"({"mbeta0": 1, "delta": 0.001})"}}) {
        auto r = server().client().Post(path, body, "application/json");
        REQUIRE(r);
        INFO(path << " " << body);
        CHECK(r->status == 400);
        const json j = body_of(r);
        CHECK(j["error"]["kind"] == "SchemaViolation");
        CHECK(j["schema_version"] == 1);
    }
}

TEST_CASE("numerical failures are 422") {
    auto r = post("/api/solve", {{"tau", 1.0}, {"N", 12}, {"max_iter", 1}});
    REQUIRE(r);
    CHECK(r->status == 422);
    const json j = body_of(r);
    CHECK(j["error"]["kind"] == "NoConvergence");
    CHECK(j["schema_version"] == 1);
}

TEST_CASE("unknown job is 404") {
    auto r = server().client().Get("/api/jobs/deadbeef");
    REQUIRE(r);
    CHECK(r->status == 404);
    CHECK(body_of(r)["schema_version"] == 1);
}

TEST_CASE("solve → floquet via job id matches the CLI path byte for byte") {
    auto s = post("/api/solve", {{"tau", 1.0}, {"w1", 1.4}, {"N", 12}});
    REQUIRE(s);
    REQUIRE(s->status == 200);
    const std::string id = body_of(s)["job_id"];
    auto f = post("/api/floquet", {{"job_id", id}});
    REQUIRE(f);
    REQUIRE(f->status == 200);
    json via_service = body_of(f);
    via_service.erase("job_id");

    const fs::path out = temp_dir() / "floquet.json";
    REQUIRE(run_cli("floquet --tau 1 --w1 1.4 --N 12 -o " + out.string()) == 0);
    const json via_cli = json::parse(slurp(out));
    CHECK(via_service.dump() == via_cli.dump());
    CHECK(std::abs(via_cli["floquet"]["det_P0"]["re"].get<double>() - 0.307353166302905) < 1e-6);

    auto bad = post("/api/floquet", {{"job_id", "0"}});
    REQUIRE(bad);
    CHECK(bad->status == 400);
}

TEST_CASE("async jobs") {
    auto r = server().client().Post("/api/solve?async=1", json{{"tau", 1.0}, {"N", 12}}.dump(), "application/json");
    REQUIRE(r);
    CHECK(r->status == 202);
    const std::string id = body_of(r)["job_id"];
    json j;
    for (int i = 0; i < 1000; ++i) {
        j = body_of(server().client().Get("/api/jobs/" + id));
        if (j["status"] != "running") break;
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    CHECK(j["status"] == "done");
    CHECK(j["kind"] == "Solve");
    CHECK(j["schema_version"] == 1);
    CHECK(j["result"]["orbit"]["N"] == 12);
    REQUIRE(server().service.job(id).has_value());
    CHECK(server().service.job(id)->status == "done");
}

TEST_CASE("POST /api/iterate streams ordered NDJSON") {
    auto r = post("/api/iterate", {{"preset", "fig7"}, {"n", 250}});
    REQUIRE(r);
    CHECK(r->status == 200);
    CHECK(r->get_header_value("Content-Type") == "application/x-ndjson");
    std::istringstream in(r->body);
    std::vector<json> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(json::parse(line));
    REQUIRE(lines.size() == 1 + 251 + 1);
    CHECK(lines.front()["type"] == "header");
    CHECK(lines.front()["schema_version"] == 1);
    for (int k = 0; k <= 250; ++k) CHECK(lines[1 + k]["step"] == k);
    CHECK(lines.back()["type"] == "summary");
    CHECK(lines.back()["status"] == "Bounded");
    CHECK(lines.back()["schema_version"] == 1);
}

TEST_CASE("iterating from a fixed point streams a constant orbit") {
    const Params p = params_from_resonant(1.0, 1.0, 0.01);
    const json seed = to_json(point(p.t_plus, p.t_plus));
    auto r = post("/api/iterate", {{"params", {{"beta", to_json(p.beta)}, {"c", to_json(p.c)}}}, {"seed", seed}, {"n", 50}});
    REQUIRE(r);
    REQUIRE(r->status == 200);
    std::istringstream in(r->body);
    std::string line;
    std::getline(in, line);
    int count = 0;
    while (std::getline(in, line)) {
        const json j = json::parse(line);
        if (j.value("type", "") == "summary") break;
        CHECK(std::abs(j["re_z"].get<double>() - p.t_plus.real()) < 1e-12);
        CHECK(std::abs(j["re_w"].get<double>() - p.t_plus.real()) < 1e-12);
        ++count;
    }
    CHECK(count == 51);
}

TEST_CASE("POST /api/search/exotic and /api/search/herman") {
    auto e = post("/api/search/exotic", {{"mbeta", 1.0}, {"tau", 1.0}, {"delta", 0.01}, {"n", 2000}});
    REQUIRE(e);
    CHECK(e->status == 200);
    const json je = body_of(e);
    CHECK(je["schema_version"] == 1);
    CHECK(je["report"]["henon_trace_summary"]["status"] == "Bounded");

    auto h = post("/api/search/herman",
                  {{"mbeta0", 1.0}, {"phi", 0.0}, {"delta", 0.01}, {"tau_guess", 1.0}, {"n", 1000}});
    REQUIRE(h);
    CHECK(h->status == 200);
    CHECK(body_of(h)["report"]["im_g_residual"].get<double>() < 1e-10);
}

TEST_CASE("CLI exit codes and outputs") {
    const fs::path err = temp_dir() / "err.txt", out = temp_dir() / "out.csv";
    CHECK(run_cli("bogus", {}, err) == 2);
    CHECK(slurp(err).find("Usage") != std::string::npos);
    CHECK(run_cli("solve-periodic --N notanumber", {}, err) == 2);
    CHECK(run_cli("solve-periodic --tau 1 --N 12 --guess fine") == 0);
    CHECK(run_cli("solve-periodic --no-such-flag", {}, err) == 2);
    CHECK(run_cli("solve-periodic --tau abc", {}, err) == 2);
    CHECK(run_cli("find-herman --mbeta0 1 --phi 0.05 --delta 0.001 --tau-guess 40,40", {}, err) == 1);
    const json e = json::parse(slurp(err));
    CHECK(e.contains("error"));

    CHECK(run_cli("iterate --preset fig7 --n 5000", out, err) == 0);
    const std::string csv = slurp(out);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5002);
    CHECK(slurp(err).find("Bounded") != std::string::npos);

    CHECK(run_cli("reproduce-appendix") == 0);
}

TEST_CASE("shipped golden files match a fresh solve") {
    const fs::path dir = fs::path(HENON_RINGS_DATA_DIR) / "golden";
    const FourierOrbit golden = orbit_from_json(json::parse(slurp(dir / "solve_tau1_N12.json")).at("orbit"));
    const FourierOrbit fresh = reference_orbit(12);
    CHECK(std::abs(golden.g - fresh.g) < 1e-12);
    CHECK((golden.z - fresh.z).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((golden.w - fresh.w).cwiseAbs().maxCoeff() < 1e-12);

    const FloquetData gd = floquet_from_json(json::parse(slurp(dir / "floquet_tau1_N12.json")).at("floquet"));
    const FloquetData fd = floquet_eigensolve(fresh);
    CHECK((gd.P0 - fd.P0).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(gd.lambda2 - fd.lambda2) < 1e-10);
}
