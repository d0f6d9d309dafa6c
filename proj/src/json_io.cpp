#include "hb/json_io.hpp"

#include <fstream>

#include "hb/error.hpp"

namespace hb {

namespace {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ParseError, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  return j;
}

}  // namespace

GeometryFile load_geometry(const json& j) {
  GeometryFile g;
  if (j.contains("prism")) {
    const auto& p = j.at("prism");
    g.prism = rectangular_prism(p.at("Lx").get<double>(), p.at("Ly").get<double>(),
                                p.at("Lz").get<double>());
    g.poly = g.prism->polyhedron();
    return g;
  }
  if (!j.contains("vertices") || !j.contains("faces"))
    fail(ErrorCode::ParseError, "geometry needs 'vertices' and 'faces' (or 'prism')");
  std::vector<Vec3> vs;
  for (const auto& v : j.at("vertices")) {
    if (!v.is_array() || v.size() != 3) fail(ErrorCode::ParseError, "vertex must be [x,y,z]");
    vs.push_back({v[0].get<double>(), v[1].get<double>(), v[2].get<double>()});
  }
  std::vector<std::vector<int>> fs;
  for (const auto& f : j.at("faces")) fs.push_back(f.get<std::vector<int>>());
  g.poly = build_polyhedron(vs, fs);
  return g;
}

GeometryFile load_geometry_file(const std::string& path) {
  return load_geometry(load_json_file(path));
}

namespace {

SignVector parse_sign_vector(const std::string& s, int n_faces) {
  if (static_cast<int>(s.size()) != n_faces)
    fail(ErrorCode::ParseError, "sign vector '" + s + "' has wrong length");
  SignVector sv;
  for (char c : s) {
    if (c != '+' && c != '-') fail(ErrorCode::ParseError, "sign vector must be +/- only");
    sv.s.push_back(c == '+' ? 1 : -1);
  }
  return sv;
}

}  // namespace

TangentTopology load_topology(const json& j, const SectorPartition& part, int n_vertices) {
  TangentTopology topo;
  topo.w.resize(n_vertices);
  const int f = static_cast<int>(part.face_to_circle().size());
  for (const auto& [key, wmap] : j.at("vertices").items()) {
    const int a = std::stoi(key);
    if (a < 0 || a >= n_vertices) fail(ErrorCode::ParseError, "vertex id out of range: " + key);
    for (const auto& [sig, val] : wmap.items()) {
      const int w = val.get<int>();
      if (w != 0) topo.w[a][parse_sign_vector(sig, f)] = w;
    }
  }
  return topo;
}

TangentTopology load_topology_file(const std::string& path, const SectorPartition& part,
                                   int n_vertices) {
  return load_topology(load_json_file(path), part, n_vertices);
}

json topology_to_json(const TangentTopology& topo) {
  json vertices = json::object();
  for (size_t a = 0; a < topo.w.size(); ++a) {
    if (topo.w[a].empty()) continue;
    json entry = json::object();
    for (const auto& [sv, w] : topo.w[a]) entry[sv.str()] = w;
    vertices[std::to_string(a)] = std::move(entry);
  }
  return json{{"vertices", std::move(vertices)}};
}

OctantTopology load_octant_topology(const json& j) {
  OctantTopology t;
  const auto e = j.at("e").get<std::vector<int>>();
  const auto k = j.at("k").get<std::vector<int>>();
  if (e.size() != 3 || k.size() != 3) fail(ErrorCode::ParseError, "e and k must have 3 entries");
  for (int i = 0; i < 3; ++i) {
    if (e[i] != 1 && e[i] != -1) fail(ErrorCode::ParseError, "edge signs must be +-1");
    t.e[i] = e[i];
    t.k[i] = k[i];
  }
  t.omega = j.at("omega").get<double>();
  return t;
}

json octant_topology_to_json(const OctantTopology& t) {
  return json{{"e", {t.e[0], t.e[1], t.e[2]}}, {"k", {t.k[0], t.k[1], t.k[2]}}, {"omega", t.omega}};
}

json sector_report(const SectorPartition& part) {
  json sectors = json::array();
  for (const auto& s : part.sectors())
    sectors.push_back({{"sigma", s.sign_vector.str()},
                       {"area", s.area},
                       {"n_boundary_arcs", s.boundary.size()}});
  return json{{"sectors", std::move(sectors)}, {"approximate", part.approximate()}};
}

json lower_bound_report(const LowerBoundReport& rep) {
  json sectors = json::array();
  for (const auto& s : rep.sectors) {
    json pairs = json::array();
    for (const auto& [p, n] : s.pairs)
      pairs.push_back({{p.x, p.y, p.z}, {n.x, n.y, n.z}});
    sectors.push_back({{"sigma", s.sigma.str()},
                       {"area", s.area},
                       {"L", s.length},
                       {"pairs", std::move(pairs)}});
  }
  return json{{"E_minus", rep.E_minus}, {"sectors", std::move(sectors)}};
}

json energy_report(const OctantEnergyReport& rep) {
  json w = json::object(), raw = json::object();
  for (int id = 0; id < 8; ++id) {
    const auto sg = octant_signs(id);
    std::string key;
    for (int s : sg) key.push_back(s > 0 ? '+' : '-');
    w[key] = rep.wrapping.w[id];
    raw[key] = rep.wrapping.raw[id];
  }
  return json{{"E2", rep.E2},
              {"E1", {{"x", rep.E1[0]}, {"y", rep.E1[1]}, {"z", rep.E1[2]}}},
              {"Omega", rep.omega},
              {"w", std::move(w)},
              {"err",
               {{"E2", rep.E2_err},
                {"E1", {rep.E1_err[0], rep.E1_err[1], rep.E1_err[2]}},
                {"Omega", rep.omega_err},
                {"w_raw", std::move(raw)}}}};
}

json upper_bound_report(const UpperBoundReport& rep) {
  json ez = json::object();
  const char* axes = "xyz";
  for (int axis = 0; axis < 3; ++axis)
    for (int tp = 0; tp < 2; ++tp) {
      const int slot = 2 * axis + tp;
      std::string key = std::string(1, axes[axis]) + (tp ? "+" : "-");
      ez[key] = {{"total", rep.EZ[slot].total},
                 {"terms", rep.EZ[slot].terms},
                 {"sigma", rep.sigma[slot]}};
    }
  return json{{"E_total", rep.E_total},
              {"E_X", rep.EX},
              {"E_Y", rep.EY},
              {"E_Z", std::move(ez)},
              {"E2", rep.E2},
              {"E_minus", rep.E_minus},
              {"ratio", rep.ratio},
              {"kappa", rep.kappa},
              {"functional", rep.functional},
              {"quadrature_error", rep.quadrature_error}};
}

json map_to_json(const OctantField& field) {
  const RationalMap* rat = dynamic_cast<const RationalMap*>(&field);
  json surgery;
  if (const auto* s = dynamic_cast<const SurgeredMap*>(&field)) {
    rat = &s->base();
    surgery = {{"m", s->covering()},
               {"w0", {s->center().real(), s->center().imag()}},
               {"eps", s->radius()}};
  }
  if (!rat) fail(ErrorCode::ParseError, "field has no rational-map serialization");
  const auto& p = rat->params();
  json real = json::array(), imag = json::array(), cplx = json::array();
  for (const auto& [r, rho] : p.real_zp) real.push_back({r, rho});
  for (const auto& [s, sig] : p.imag_zp) imag.push_back({s, sig});
  for (const auto& [t, tau] : p.complex_zp) cplx.push_back({t.real(), t.imag(), tau});
  return json{{"lambda", p.lambda}, {"n", p.n},           {"real", std::move(real)},
              {"imag", std::move(imag)}, {"complex", std::move(cplx)}, {"surgery", surgery}};
}

std::string dump_deterministic(const json& j) {
  // nlohmann::json orders keys and emits shortest round-trip doubles, so the
  // textual form is a pure function of the value.
  return j.dump(2) + "\n";
}

}  // namespace hb
