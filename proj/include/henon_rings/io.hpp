#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "henon_rings/bnf.hpp"
#include "henon_rings/floquet.hpp"
#include "henon_rings/search.hpp"

namespace hr {

using nlohmann::json;

inline constexpr int schema_version = 1;

// malformed input documents
class SchemaError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

json to_json(cplx v);
cplx cplx_from_json(const json& j);

json to_json(const PlanarPoint& p);
PlanarPoint point_from_json(const json& j);

json to_json(const Params& p);
// a full Params object, or {beta, c}, or {tau, mbeta, delta}
Params params_from_json(const json& j);

json to_json(const CJet& jet);
CJet jet_from_json(const json& j);

json to_json(const FourierOrbit& o);
FourierOrbit orbit_from_json(const json& j);

json to_json(const FloquetData& d);
FloquetData floquet_from_json(const json& j);

json to_json(const DerivedQuantities& q);
json to_json(const TraceSummary& s);
json to_json(const SearchReport& r);

json trace_metadata(const OrbitTrace& t);
std::string trace_csv(const OrbitTrace& t);
// writes the CSV at `path` and the metadata sidecar at `path` + ".json"
void write_trace(const std::string& path, const OrbitTrace& t);

json error_json(const std::string& kind, const std::string& message);

struct Preset {
    std::string name;
    MapKind map = MapKind::Henon;
    Params params;
    PlanarPoint seed;
    int n = 0;
};

// $HENON_RINGS_PRESETS, else the presets.json shipped in data/
std::string presets_path();
json load_presets_json();
Preset find_preset(const std::string& name);

}  // namespace hr
