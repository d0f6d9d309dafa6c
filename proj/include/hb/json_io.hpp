#pragma once

#include <string>

#include "hb/assignment.hpp"
#include "hb/extension.hpp"

#include <json.hpp>

namespace hb {

using json = nlohmann::json;

// Geometry file: {"vertices": [[x,y,z],...], "faces": [[i0,i1,...],...]} or
// {"prism": {"Lx":.., "Ly":.., "Lz":..}}.
struct GeometryFile {
  Polyhedron poly;
  std::optional<Prism> prism;
};

GeometryFile load_geometry(const json& j);
GeometryFile load_geometry_file(const std::string& path);

// Topology file: {"vertices": {"<id>": {"<sigma string>": w, ...}, ...}}.
TangentTopology load_topology(const json& j, const SectorPartition& part, int n_vertices);
TangentTopology load_topology_file(const std::string& path, const SectorPartition& part,
                                   int n_vertices);
json topology_to_json(const TangentTopology& topo);

// Octant topology: {"e": [..], "k": [..], "omega": x}.
OctantTopology load_octant_topology(const json& j);
json octant_topology_to_json(const OctantTopology& t);

json sector_report(const SectorPartition& part);
json lower_bound_report(const LowerBoundReport& rep);
json energy_report(const OctantEnergyReport& rep);
json upper_bound_report(const UpperBoundReport& rep);

// Rational/surgered map serialization.
json map_to_json(const OctantField& field);

// Deterministic serialization: 17 significant digits, keys in fixed order.
std::string dump_deterministic(const json& j);

}  // namespace hb
