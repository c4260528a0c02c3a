#include <csignal>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "henon_rings/pipeline.hpp"
#include "henon_rings/service.hpp"

using namespace hr;

namespace {

void emit(const json& j, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out);
    f << j.dump(2) << '\n';
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path + ": " + e.what());
    }
}

// exit 1 with a JSON error on stderr; argument-level problems exit 2
int fail(const std::string& kind, const std::string& msg, int code) {
    std::cerr << error_json(kind, msg).dump() << '\n';
    return code;
}

Service* running_service = nullptr;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exotic rotation domains and Herman rings of complex Hénon maps"};
    app.require_subcommand(1);

    std::string tau_s = "1", w1_s = "1.4", guess = "coarse", out, orbit_file;
    int N = 12;

    auto* solve = app.add_subcommand("solve-periodic", "Fourier–Newton solve of the model periodic orbit");
    solve->add_option("--tau", tau_s, "τ as re or re,im")->capture_default_str();
    solve->add_option("--w1", w1_s, "normalization w₁ as re or re,im")->capture_default_str();
    solve->add_option("--N", N, "harmonic cutoff")->capture_default_str()->check(CLI::Range(1, 60));
    solve->add_option("--guess", guess, "initial guess level")->check(CLI::IsMember({"coarse", "fine"}))->capture_default_str();
    solve->add_option("-o,--out", out, "output JSON file (default stdout)");

    auto* floq = app.add_subcommand("floquet", "Floquet eigenproblem and derived quantities");
    floq->add_option("--tau", tau_s, "τ as re or re,im")->capture_default_str();
    floq->add_option("--w1", w1_s, "normalization w₁")->capture_default_str();
    floq->add_option("--N", N, "harmonic cutoff")->capture_default_str()->check(CLI::Range(7, 60));
    floq->add_option("--orbit", orbit_file, "FourierOrbit JSON (a solve-periodic output or bare orbit)");
    floq->add_option("-o,--out", out, "output JSON file (default stdout)");

    std::string preset, map_s = "Henon", beta_s, c_s, z_s, w_s;
    int n_iter = -1, sym = 3;
    double escape = 10.0;
    auto* iter = app.add_subcommand("iterate", "Iterate a Hénon or h^mod orbit, write CSV + metadata sidecar");
    iter->add_option("--preset", preset, "preset name from the preset registry");
    iter->add_option("--map", map_s, "Henon or HenonMod")->check(CLI::IsMember({"Henon", "HenonMod"}));
    iter->add_option("--beta", beta_s, "β as re,im");
    iter->add_option("--c", c_s, "c as re,im");
    iter->add_option("--z", z_s, "seed z as re,im");
    iter->add_option("--w", w_s, "seed w as re,im");
    iter->add_option("--n", n_iter, "iterations")->check(CLI::PositiveNumber);
    iter->add_option("--escape-radius", escape, "escape radius")->capture_default_str();
    iter->add_option("--symmetry-order", sym, "fold for the rotation estimate")->capture_default_str();
    iter->add_option("-o,--out", out, "CSV path (metadata goes to PATH.json); default stdout");

    double mbeta = 1.0, delta = 0.01, mbeta0 = 0.311841, phi = 0.0;
    std::string tau_guess_s = "0.4,-0.0071", trace_path;
    int n_search = -1;
    auto* exotic = app.add_subcommand("find-exotic", "Exotic rotation domain recipe");
    exotic->add_option("--mbeta", mbeta, "β̊ (real)")->capture_default_str();
    exotic->add_option("--tau", tau_s, "τ as re or re,im")->capture_default_str();
    exotic->add_option("--delta", delta, "δ")->capture_default_str();
    exotic->add_option("--n", n_search, "iterations (default 5000)");
    exotic->add_option("--emit-trace", trace_path, "write the Hénon OrbitTrace CSV here");
    exotic->add_option("-o,--out", out, "output JSON file (default stdout)");

    auto* herman = app.add_subcommand("find-herman", "Herman ring recipe");
    herman->add_option("--mbeta0", mbeta0, "|β̊|")->capture_default_str();
    herman->add_option("--phi", phi, "arg β̊")->capture_default_str();
    herman->add_option("--delta", delta, "δ")->capture_default_str();
    herman->add_option("--tau-guess", tau_guess_s, "starting τ as re,im")->capture_default_str();
    herman->add_option("--n", n_search, "iterations (default 20000)");
    herman->add_option("--emit-trace", trace_path, "write the Hénon OrbitTrace CSV here");
    herman->add_option("-o,--out", out, "output JSON file (default stdout)");

    auto* appendix = app.add_subcommand("reproduce-appendix", "Recompute the published τ = 1 values, pass/fail table");

    std::string host = "127.0.0.1";
    int port = 8080;
    auto* serve = app.add_subcommand("serve", "Run the local HTTP/NDJSON service");
    serve->add_option("--host", host)->capture_default_str();
    serve->add_option("--port", port)->capture_default_str()->check(CLI::Range(0, 65535));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (*solve) {
            SolveRequest r;
            r.tau = parse_complex(tau_s);
            r.w1 = parse_complex(w1_s);
            r.N = N;
            r.guess = guess == "fine" ? GuessLevel::Fine : GuessLevel::Coarse;
            emit(solve_response(r), out);
        } else if (*floq) {
            FourierOrbit o;
            if (!orbit_file.empty()) {
                const json j = read_json_file(orbit_file);
                o = orbit_from_json(j.contains("orbit") ? j.at("orbit") : j);
            } else {
                SolveRequest r;
                r.tau = parse_complex(tau_s);
                r.w1 = parse_complex(w1_s);
                r.N = N;
                o = orbit_from_json(solve_response(r).at("orbit"));
            }
            emit(floquet_response(o), out);
        } else if (*iter) {
            json req = json::object();
            if (!preset.empty()) req["preset"] = preset;
            if (!beta_s.empty() || !c_s.empty()) {
                if (beta_s.empty() || c_s.empty()) return fail("ArgumentError", "--beta and --c go together", 2);
                req["params"] = {{"beta", to_json(parse_complex(beta_s))}, {"c", to_json(parse_complex(c_s))}};
            }
            if (!z_s.empty() || !w_s.empty()) {
                if (z_s.empty() || w_s.empty()) return fail("ArgumentError", "--z and --w go together", 2);
                req["seed"] = {{"z", to_json(parse_complex(z_s))}, {"w", to_json(parse_complex(w_s))}};
            }
            if (iter->count("--map")) req["map"] = map_s;
            if (n_iter > 0) req["n"] = n_iter;
            req["escape_radius"] = escape;
            req["symmetry_order"] = sym;
            const IterateRequest r = iterate_request_from_json(req);
            const OrbitTrace t = run_iterate(r);
            const json meta = iterate_summary(t, r.symmetry_order);
            if (out.empty() || out == "-") {
                std::cout << trace_csv(t);
                std::cerr << meta.dump() << '\n';
            } else {
                write_trace(out, t);
                std::ofstream(out + ".json") << meta.dump(2) << '\n';
                std::cout << meta.dump(2) << '\n';
            }
        } else if (*exotic || *herman) {
            json req;
            SearchReport rep;
            if (*exotic) {
                rep = find_exotic(mbeta, parse_complex(tau_s), delta, n_search > 0 ? n_search : 5000);
            } else {
                rep = find_herman(mbeta0, phi, delta, parse_complex(tau_guess_s), n_search > 0 ? n_search : 20000);
            }
            if (!trace_path.empty() && !rep.trace.points.empty()) write_trace(trace_path, rep.trace);
            emit({{"schema_version", schema_version}, {"report", to_json(rep)}}, out);
            if (rep.verdict == Verdict::Failed) return fail("SearchFailed", rep.reason, 1);
        } else if (*appendix) {
            const auto checks = appendix_checks();
            std::cout << format_checks(checks);
            for (const Check& c : checks)
                if (!c.pass) return 1;
        } else if (*serve) {
            Service svc;
            const int bound = svc.bind(host, port);
            if (bound < 0) return fail("BindFailure", "cannot bind " + host + ":" + std::to_string(port), 1);
            std::cerr << "listening on http://" << host << ':' << bound << '\n';
            running_service = &svc;
            std::signal(SIGINT, [](int) { if (running_service) running_service->stop(); });
            std::signal(SIGTERM, [](int) { if (running_service) running_service->stop(); });
            svc.run();
            running_service = nullptr;
        }
    } catch (const NumericalError& e) {
        return fail(e.kind(), e.what(), 1);
    } catch (const std::invalid_argument& e) {
        return fail("ArgumentError", e.what(), 2);
    } catch (const json::exception& e) {
        return fail("ArgumentError", e.what(), 2);
    } catch (const std::exception& e) {
        return fail("Failure", e.what(), 1);
    }
    return 0;
}
