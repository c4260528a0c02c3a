#pragma once

#include <string>
#include <vector>

#include "henon_rings/io.hpp"

namespace hr {

// Request → response bodies shared by the CLI and the HTTP service.

struct SolveRequest {
    cplx tau{1.0};
    cplx w1{1.4};
    int N = 12;
    GuessLevel guess = GuessLevel::Coarse;
    NewtonOptions newton;
};
SolveRequest solve_request_from_json(const json& j);
json solve_response(const SolveRequest& req);
json floquet_response(const FourierOrbit& orbit);

struct IterateRequest {
    MapKind map = MapKind::Henon;
    Params params;
    PlanarPoint seed = PlanarPoint::Zero();
    int n = 5000;
    double escape_radius = 10.0;
    int symmetry_order = 3;
};
// {preset} optionally overridden by {params, seed, map, n, escape_radius}
IterateRequest iterate_request_from_json(const json& j);
OrbitTrace run_iterate(const IterateRequest& req);
// trace metadata plus classification when the orbit is long enough
json iterate_summary(const OrbitTrace& t, int symmetry_order);

json exotic_response(const json& req);
json herman_response(const json& req);

struct Check {
    std::string name;
    double value = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    char relation = '=';  // '=' within tolerance, '<' or '>' against a bound
};
std::vector<Check> appendix_checks();
std::string format_checks(const std::vector<Check>& checks);

cplx parse_complex(const std::string& s);

}  // namespace hr
