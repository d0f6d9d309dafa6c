// hb: homotopy-resolved Dirichlet energy bounds for tangent unit-vector
// fields on convex polyhedra.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hb/json_io.hpp"

namespace {

using namespace hb;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ParseError:
      return 2;
    case ErrorCode::NonConvex:
    case ErrorCode::NonPlanarFace:
    case ErrorCode::DegenerateFace:
    case ErrorCode::BadOrdering:
    case ErrorCode::NonPositive:
      return 3;
    case ErrorCode::InadmissibleTopology:
    case ErrorCode::UnknownSector:
    case ErrorCode::NonIntegerInvariant:
    case ErrorCode::InconsistentWrapping:
      return 4;
    case ErrorCode::ResidueViolation:
      return 5;
    default:
      return 6;
  }
}

void write_output(const std::string& out, const json& j) {
  const std::string text = dump_deterministic(j);
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) fail(ErrorCode::ParseError, "cannot write " + out);
  f << text;
}

void write_csv(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream f(path);
  if (f) f << text;
}

std::string csv_path(const std::string& out) {
  if (out.empty()) return {};
  const auto dot = out.find_last_of('.');
  return (dot == std::string::npos ? out : out.substr(0, dot)) + ".csv";
}

struct Options {
  std::string geometry, topology, out;
  double tol = 1e-6;
  int mnM = -1, mnN = -1;
  std::vector<double> sweep_kappa;
  std::vector<int> e{1, 1, 1}, k{0, 0, 0};
  double omega = 0.0;
  bool have_octant = false;
};

QuadratureSpec spec_for(const Options& o) {
  QuadratureSpec spec;
  spec.rel_tol = o.tol;
  spec.abs_tol = std::min(1e-9, o.tol);
  return spec;
}

int cmd_sectors(const Options& o) {
  const GeometryFile g = load_geometry_file(o.geometry);
  const SectorPartition part = enumerate_sectors(g.poly);
  write_output(o.out, sector_report(part));
  std::string csv = "sigma,area\n";
  for (const auto& s : part.sectors())
    csv += s.sign_vector.str() + "," + std::to_string(s.area) + "\n";
  write_csv(csv_path(o.out), csv);
  return 0;
}

int cmd_lower_bound(const Options& o) {
  const GeometryFile g = load_geometry_file(o.geometry);
  const SectorPartition part = enumerate_sectors(g.poly);
  const TangentTopology topo = load_topology_file(o.topology, part, g.poly.n_vertices());
  const LowerBoundReport rep = g.prism ? lower_bound_energy(*g.prism, part, topo)
                                       : lower_bound_energy(g.poly, part, topo);
  write_output(o.out, lower_bound_report(rep));
  return 0;
}

int cmd_construct(const Options& o) {
  const QuadratureSpec spec = spec_for(o);
  json out;
  if (o.mnM >= 0) {
    const Prism prism = rectangular_prism(2, 2, 2);
    const SectorPartition part = enumerate_sectors(prism.polyhedron());
    const PrismFieldSet fields = mn_example_field(o.mnM, o.mnN);
    const TangentTopology topo = numeric_prism_topology(prism, part, fields, spec);
    std::map<SignVector, int> sums;
    for (const auto& wm : topo.w)
      for (const auto& [sv, w] : wm) sums[sv] += w;
    json sum_rule = json::object();
    for (const auto& [sv, total] : sums) sum_rule[sv.str()] = total;
    out["topology"] = topology_to_json(topo);
    out["sum_rule"] = std::move(sum_rule);
    out["octant_report"] = energy_report(octant_energy_report(*fields.normalized[0], spec));
  } else if (o.have_octant || !o.topology.empty()) {
    OctantTopology t;
    if (!o.topology.empty()) {
      std::ifstream in(o.topology);
      if (!in) fail(ErrorCode::ParseError, "cannot open " + o.topology);
      json j;
      try {
        in >> j;
      } catch (const std::exception& e) {
        fail(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
      }
      t = load_octant_topology(j);
    } else {
      t.e = {o.e[0], o.e[1], o.e[2]};
      t.k = {o.k[0], o.k[1], o.k[2]};
      t.omega = o.omega;
    }
    const auto field = surgered_map(t);
    const OctantTopology numeric = map_invariants(*field, spec);
    out["map"] = map_to_json(*field);
    out["requested"] = octant_topology_to_json(t);
    out["numeric"] = octant_topology_to_json(numeric);
    if (const auto* rat = dynamic_cast<const RationalMap*>(field.get()))
      out["closed_form"] = octant_topology_to_json(rat->topology_closed_form());
  } else {
    fail(ErrorCode::ParseError, "construct needs --mn, --topology, or --e/--k/--omega");
  }
  write_output(o.out, out);
  return 0;
}

int cmd_extend(const Options& o) {
  const QuadratureSpec spec = spec_for(o);
  GeometryFile g = load_geometry_file(o.geometry);
  if (!g.prism) fail(ErrorCode::ParseError, "extend requires a prism geometry");

  auto run_one = [&](const Prism& prism) {
    const SectorPartition part = enumerate_sectors(prism.polyhedron());
    PrismFieldSet fields;
    std::optional<std::array<OctantTopology, 8>> octants;
    if (o.mnM >= 0) {
      fields = mn_example_field(o.mnM, o.mnN);
    } else if (o.have_octant) {
      OctantTopology t;
      t.e = {o.e[0], o.e[1], o.e[2]};
      t.k = {o.k[0], o.k[1], o.k[2]};
      t.omega = o.omega;
      fields = uniform_field_set(surgered_map(t));
      std::array<OctantTopology, 8> arr;
      arr.fill(t);
      octants = arr;
    } else {
      fail(ErrorCode::ParseError, "extend needs --mn or --e/--k/--omega fields");
    }
    return extend_and_bound(prism, part, fields, octants, spec);
  };

  if (!o.sweep_kappa.empty()) {
    std::string csv = "kappa,E_total,E_minus,ratio\n";
    json rows = json::array();
    const double lz = g.prism->lz();
    for (double kp : o.sweep_kappa) {
      const Prism prism = rectangular_prism(2 * kp * lz, 2 * lz, 2 * lz);
      const UpperBoundReport rep = run_one(prism);
      rows.push_back(upper_bound_report(rep));
      csv += std::to_string(kp) + "," + std::to_string(rep.E_total) + "," +
             std::to_string(rep.E_minus) + "," + std::to_string(rep.ratio) + "\n";
    }
    write_output(o.out, json{{"sweep", std::move(rows)}});
    write_csv(csv_path(o.out), csv);
    return 0;
  }

  const UpperBoundReport rep = run_one(*g.prism);
  write_output(o.out, upper_bound_report(rep));
  if (o.mnM >= 0) {
    std::string csv = "M,N,E_total,E_minus,ratio\n";
    csv += std::to_string(o.mnM) + "," + std::to_string(o.mnN) + "," +
           std::to_string(rep.E_total) + "," + std::to_string(rep.E_minus) + "," +
           std::to_string(rep.ratio) + "\n";
    write_csv(csv_path(o.out), csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homotopy-resolved Dirichlet energy bounds on convex polyhedra"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--tol", o.tol, "quadrature relative tolerance");
    cmd->add_option("--out", o.out, "output JSON path (default: stdout)");
  };

  auto* sectors = app.add_subcommand("sectors", "enumerate sphere sectors of a polyhedron");
  sectors->add_option("--geometry", o.geometry, "geometry JSON")->required();
  add_common(sectors);

  auto* lower = app.add_subcommand("lower-bound", "Theorem-1 lower bound for a topology");
  lower->add_option("--geometry", o.geometry, "geometry JSON")->required();
  lower->add_option("--topology", o.topology, "topology JSON")->required();
  add_common(lower);

  auto* construct = app.add_subcommand("construct", "build an octant configuration");
  construct->add_option("--topology", o.topology, "octant topology JSON {e,k,omega}");
  auto* mn1 = construct->add_option("--mn", [&o](const CLI::results_t& res) {
    if (res.size() != 2) return false;
    o.mnM = std::stoi(res[0]);
    o.mnN = std::stoi(res[1]);
    return true;
  }, "M N example field");
  mn1->expected(2);
  construct->add_option("--e", o.e, "edge signs")->expected(3);
  auto* komega = construct->add_option("--k", o.k, "kink numbers")->expected(3);
  construct->add_option("--omega", o.omega, "trapped area");
  komega->each([&o](const std::string&) { o.have_octant = true; });
  construct->add_flag_callback("--octant", [&o]() { o.have_octant = true; },
                               "use --e/--k/--omega");
  add_common(construct);

  auto* extend = app.add_subcommand("extend", "extension energy and bound ratio on a prism");
  extend->add_option("--geometry", o.geometry, "prism geometry JSON")->required();
  auto* mn2 = extend->add_option("--mn", [&o](const CLI::results_t& res) {
    if (res.size() != 2) return false;
    o.mnM = std::stoi(res[0]);
    o.mnN = std::stoi(res[1]);
    return true;
  }, "M N example field");
  mn2->expected(2);
  extend->add_option("--e", o.e, "edge signs")->expected(3);
  auto* komega2 = extend->add_option("--k", o.k, "kink numbers")->expected(3);
  extend->add_option("--omega", o.omega, "trapped area");
  komega2->each([&o](const std::string&) { o.have_octant = true; });
  extend->add_option("--sweep-kappa", o.sweep_kappa, "aspect ratios to sweep")->delimiter(',');
  add_common(extend);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sectors->parsed()) return cmd_sectors(o);
    if (lower->parsed()) return cmd_lower_bound(o);
    if (construct->parsed()) return cmd_construct(o);
    if (extend->parsed()) return cmd_extend(o);
  } catch (const hb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 6;
  }
  return 0;
}
