#include "hb/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <queue>
#include <thread>

#include "hb/error.hpp"

namespace hb {

namespace {

constexpr double kGLNodes[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                0.7966664774136267,  0.9602898564975363};
constexpr double kGLWeights[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                  0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                  0.2223810344533745, 0.1012285362903763};

double gl8(const std::function<double(double)>& f, double a, double b) {
  const double c = (a + b) / 2, h = (b - a) / 2;
  double sum = 0.0;
  for (int i = 0; i < 8; ++i) sum += kGLWeights[i] * f(c + h * kGLNodes[i]);
  return sum * h;
}

double gl8x8(const std::function<double(double, double)>& f, double u0, double u1, double v0,
             double v1) {
  const double cu = (u0 + u1) / 2, hu = (u1 - u0) / 2;
  const double cv = (v0 + v1) / 2, hv = (v1 - v0) / 2;
  double sum = 0.0;
  for (int i = 0; i < 8; ++i) {
    double row = 0.0;
    const double u = cu + hu * kGLNodes[i];
    for (int j = 0; j < 8; ++j) row += kGLWeights[j] * f(u, cv + hv * kGLNodes[j]);
    sum += kGLWeights[i] * row;
  }
  return sum * hu * hv;
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(uint64_t& state) {
  state = splitmix64(state);
  return (state >> 11) * 0x1.0p-53;
}

std::vector<double> segment(double a, double b, const std::vector<double>& breaks) {
  std::vector<double> cuts = {a};
  for (double x : breaks)
    if (x > a + 1e-15 && x < b - 1e-15) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

}  // namespace

QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                        const std::vector<double>& breaks, const QuadratureSpec& spec) {
  struct Interval {
    double a, b, coarse, fine, err;
    int depth;
    long id;
  };
  auto make = [&](double x0, double x1, int depth, long id) {
    const double coarse = gl8(f, x0, x1);
    const double m = (x0 + x1) / 2;
    const double fine = gl8(f, x0, m) + gl8(f, m, x1);
    return Interval{x0, x1, coarse, fine, std::abs(fine - coarse), depth, id};
  };
  auto cmp = [](const Interval& lhs, const Interval& rhs) {
    if (lhs.err != rhs.err) return lhs.err < rhs.err;
    return lhs.id > rhs.id;
  };
  std::priority_queue<Interval, std::vector<Interval>, decltype(cmp)> q(cmp);
  const auto cuts = segment(a, b, breaks);
  long next_id = 0;
  double total = 0.0, total_err = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    auto iv = make(cuts[i], cuts[i + 1], 0, next_id++);
    total += iv.fine;
    total_err += iv.err;
    q.push(iv);
  }
  QuadResult res;
  auto done = [&]() {
    return total_err <= std::max(spec.rel_tol * std::abs(total), spec.abs_tol);
  };
  while (!q.empty() && !done()) {
    const Interval iv = q.top();
    q.pop();
    if (iv.depth >= spec.max_depth) {
      res.tolerance_met = done();
      break;
    }
    total -= iv.fine;
    total_err -= iv.err;
    const double m = (iv.a + iv.b) / 2;
    for (const auto& child : {make(iv.a, m, iv.depth + 1, next_id++),
                              make(m, iv.b, iv.depth + 1, next_id++)}) {
      total += child.fine;
      total_err += child.err;
      q.push(child);
    }
  }
  res.value = total;
  res.error = total_err;
  if (!done()) res.tolerance_met = false;
  return res;
}

namespace {

struct Cell {
  double u0, u1, v0, v1;
  double coarse, fine, err;
  int depth;
  long id;
};

}  // namespace

QuadResult integrate_2d(const std::function<double(double, double)>& f, double u0, double u1,
                        double v0, double v1, const std::vector<double>& breaks_u,
                        const std::vector<double>& breaks_v, const QuadratureSpec& spec) {
  auto fine_sum = [&](double a0, double a1, double b0, double b1) {
    const double mu = (a0 + a1) / 2, mv = (b0 + b1) / 2;
    return gl8x8(f, a0, mu, b0, mv) + gl8x8(f, mu, a1, b0, mv) + gl8x8(f, a0, mu, mv, b1) +
           gl8x8(f, mu, a1, mv, b1);
  };
  long next_id = 0;
  auto make = [&](double a0, double a1, double b0, double b1, int depth) {
    const double coarse = gl8x8(f, a0, a1, b0, b1);
    const double fine = fine_sum(a0, a1, b0, b1);
    return Cell{a0, a1, b0, b1, coarse, fine, std::abs(fine - coarse), depth, next_id++};
  };
  auto cmp = [](const Cell& lhs, const Cell& rhs) {
    if (lhs.err != rhs.err) return lhs.err < rhs.err;
    return lhs.id > rhs.id;
  };
  std::priority_queue<Cell, std::vector<Cell>, decltype(cmp)> q(cmp);

  double total = 0.0, total_err = 0.0;
  const auto cu = segment(u0, u1, breaks_u);
  const auto cv = segment(v0, v1, breaks_v);
  for (size_t i = 0; i + 1 < cu.size(); ++i)
    for (size_t j = 0; j + 1 < cv.size(); ++j) {
      const Cell c = make(cu[i], cu[i + 1], cv[j], cv[j + 1], 0);
      total += c.fine;
      total_err += c.err;
      q.push(c);
    }

  auto done = [&]() {
    return total_err <= std::max(spec.rel_tol * std::abs(total), spec.abs_tol);
  };
  QuadResult res;
  std::vector<Cell> exhausted;
  while (!q.empty() && !done()) {
    const Cell c = q.top();
    q.pop();
    if (c.depth >= spec.max_depth) {
      exhausted.push_back(c);
      total -= c.fine;
      total_err -= c.err;
      continue;
    }
    total -= c.fine;
    total_err -= c.err;
    const double mu = (c.u0 + c.u1) / 2, mv = (c.v0 + c.v1) / 2;
    const Cell kids[4] = {make(c.u0, mu, c.v0, mv, c.depth + 1),
                          make(mu, c.u1, c.v0, mv, c.depth + 1),
                          make(c.u0, mu, mv, c.v1, c.depth + 1),
                          make(mu, c.u1, mv, c.v1, c.depth + 1)};
    for (const auto& k : kids) {
      total += k.fine;
      total_err += k.err;
      q.push(k);
    }
  }

  // Depth-capped cells: the rule estimate is unreliable (discontinuous
  // integrands); replace with stratified Monte-Carlo, seeded by the cell
  // coordinates for reproducibility.
  for (const Cell& c : exhausted) {
    if (!spec.mc_fallback) {
      total += c.fine;
      total_err += c.err;
      continue;
    }
    const int grid = 64;  // 64 x 64 = 4096 stratified samples
    uint64_t seed = 0x8b72e1e2u;
    seed = splitmix64(seed ^ (uint64_t)std::llround(c.u0 * 1e12));
    seed = splitmix64(seed ^ (uint64_t)std::llround(c.v0 * 1e12));
    const double du = (c.u1 - c.u0) / grid, dv = (c.v1 - c.v0) / grid;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < grid; ++i)
      for (int j = 0; j < grid; ++j) {
        const double x = f(c.u0 + (i + uniform01(seed)) * du, c.v0 + (j + uniform01(seed)) * dv);
        s += x;
        s2 += x * x;
      }
    const int n = grid * grid;
    const double mean = s / n;
    const double var = std::max(0.0, s2 / n - mean * mean);
    const double area = (c.u1 - c.u0) * (c.v1 - c.v0);
    total += mean * area;
    total_err += std::sqrt(var / n) * area;
  }

  res.value = total;
  res.error = total_err;
  res.tolerance_met = done();
  return res;
}

QuadResult integrate_patches(const std::vector<QuadPatch>& patches, const QuadratureSpec& spec) {
  QuadResult out;
  for (const auto& p : patches) {
    const QuadResult r =
        integrate_2d(p.integrand, p.u0, p.u1, p.v0, p.v1, p.breaks_u, p.breaks_v, spec);
    out.value += r.value;
    out.error += r.error;
    out.tolerance_met = out.tolerance_met && r.tolerance_met;
  }
  return out;
}

QuadResult energy_E2(const OctantField& field, const QuadratureSpec& spec) {
  return integrate_patches(field.density_patches(DensityKind::Energy, nullptr), spec);
}

QuadResult trapped_area_numeric(const OctantField& field, const QuadratureSpec& spec) {
  return integrate_patches(field.density_patches(DensityKind::SignedArea, nullptr), spec);
}

QuadResult energy_E1(const OctantField& field, int axis, const QuadratureSpec& spec) {
  auto f = [&](double alpha) {
    const EdgeJet j = field.edge_trace(axis, alpha);
    return norm2(j.deriv);
  };
  return integrate_1d(f, 0.0, kPi / 2.0, field.edge_breaks(axis), spec);
}

WrappingResult wrapping_numbers_numeric(const OctantField& field, const QuadratureSpec& spec) {
  WrappingResult res;
  bool snap_failed = false;
  double worst = 0.0;
  for (int id = 0; id < 8; ++id) {
    const auto sg = octant_signs(id);
    ValueWeight weight = [sg](const Vec3& nu) {
      return (sg[0] * nu.x > 0 && sg[1] * nu.y > 0 && sg[2] * nu.z > 0) ? 1.0 : 0.0;
    };
    const QuadResult r = integrate_patches(field.density_patches(DensityKind::SignedArea, &weight), spec);
    res.raw[id] = r.value / (kPi / 2.0);
    res.err[id] = r.error / (kPi / 2.0);
    const double rounded = std::round(res.raw[id]);
    const double off = std::abs(res.raw[id] - rounded);
    worst = std::max(worst, off);
    if (off > 0.05) snap_failed = true;
    res.w[id] = static_cast<int>(rounded);
  }
  if (snap_failed)
    fail(ErrorCode::SnapFailure, "wrapping number " + std::to_string(worst) +
                                     " away from an integer; refine the quadrature");
  return res;
}

OctantEnergyReport octant_energy_report(const OctantField& field, const QuadratureSpec& spec) {
  OctantEnergyReport rep;
  const QuadResult e2 = energy_E2(field, spec);
  rep.E2 = e2.value;
  rep.E2_err = e2.error;
  for (int j = 0; j < 3; ++j) {
    const QuadResult e1 = energy_E1(field, j, spec);
    rep.E1[j] = e1.value;
    rep.E1_err[j] = e1.error;
  }
  const QuadResult om = trapped_area_numeric(field, spec);
  rep.omega = om.value;
  rep.omega_err = om.error;
  rep.wrapping = wrapping_numbers_numeric(field, spec);
  return rep;
}

namespace {

// Continuous in-plane angle of the trace along the octant edge about axis j,
// adaptively sampled; returns the net unwrapped change chi(pi/2) - chi(0).
double unwrap_edge_swing(const OctantField& field, int axis) {
  const int kaxis = (axis + 1) % 3, laxis = (axis + 2) % 3;
  auto chi_raw = [&](double alpha) {
    const Vec3 nu = field.edge_trace(axis, alpha).value;
    const double ck = nu[kaxis], cl = nu[laxis];
    if (ck * ck + cl * cl < 1e-12)
      fail(ErrorCode::WindingAmbiguous, "edge trace passes through the winding axis");
    return std::atan2(cl, ck);
  };
  struct Node { double alpha, chi; };
  std::vector<Node> nodes;
  const int n0 = 129;
  for (int i = 0; i < n0; ++i) {
    const double a = kPi / 2.0 * i / (n0 - 1);
    nodes.push_back({a, chi_raw(a)});
  }
  // Refine until consecutive raw jumps are below pi/2 (mod 2 pi).
  for (int pass = 0; pass < 24; ++pass) {
    std::vector<Node> refined;
    bool changed = false;
    for (size_t i = 0; i + 1 < nodes.size(); ++i) {
      refined.push_back(nodes[i]);
      double d = std::remainder(nodes[i + 1].chi - nodes[i].chi, 2.0 * kPi);
      if (std::abs(d) > kPi / 2.0) {
        const double mid = (nodes[i].alpha + nodes[i + 1].alpha) / 2;
        refined.push_back({mid, chi_raw(mid)});
        changed = true;
      }
    }
    refined.push_back(nodes.back());
    nodes = std::move(refined);
    if (!changed) break;
    if (pass == 23)
      fail(ErrorCode::WindingAmbiguous, "winding refinement did not converge");
  }
  double swing = 0.0;
  for (size_t i = 0; i + 1 < nodes.size(); ++i)
    swing += std::remainder(nodes[i + 1].chi - nodes[i].chi, 2.0 * kPi);
  return swing;
}

}  // namespace

OctantTopology map_invariants(const OctantField& field, const QuadratureSpec& spec) {
  OctantTopology t;
  // Edge signs from the corner values nu(j-hat) = e_j j-hat.
  const Chart ch = field.chart();
  const std::array<std::pair<double, double>, 3> corner =
      (ch == Chart::PolarOctant)
          ? std::array<std::pair<double, double>, 3>{{{kPi / 2, 0.0}, {kPi / 2, kPi / 2}, {0.0, 0.0}}}
          : std::array<std::pair<double, double>, 3>{{{1.0, 0.0}, {1.0, kPi / 2}, {0.0, 0.0}}};
  for (int j = 0; j < 3; ++j) {
    const Vec3 nu = field.eval(corner[j].first, corner[j].second).value;
    const double c = nu[j];
    if (std::abs(c) < 1.0 - 1e-6)
      fail(ErrorCode::WindingAmbiguous, "field is not axis-aligned at an octant corner");
    t.e[j] = c > 0 ? 1 : -1;
  }
  // Kink numbers: winding relative to the minimal +-pi/2 swing.
  for (int j = 0; j < 3; ++j) {
    const double swing = unwrap_edge_swing(field, j);
    const double minimal = std::remainder(swing, 2.0 * kPi);
    const double kf = -(swing - minimal) / (2.0 * kPi);
    if (std::abs(kf - std::round(kf)) > 1e-6)
      fail(ErrorCode::NonIntegerInvariant, "winding count is not an integer");
    t.k[j] = static_cast<int>(std::llround(kf));
  }
  t.omega = trapped_area_numeric(field, spec).value;
  return t;
}

TangentTopology numeric_prism_topology(const Prism& prism, const SectorPartition& part,
                                       const PrismFieldSet& fields, const QuadratureSpec& spec) {
  TangentTopology topo;
  topo.w.resize(8);
  std::map<const OctantField*, WrappingResult> cache;
  for (int a = 0; a < 8; ++a) {
    const OctantField* f = fields.normalized[a].get();
    auto it = cache.find(f);
    if (it == cache.end()) it = cache.insert({f, wrapping_numbers_numeric(*f, spec)}).first;
    const int orient = chart_orientation(a);
    for (int id = 0; id < 8; ++id) {
      const int w = it->second.w[id];
      if (w == 0) continue;
      topo.w[a][prism_sign_vector(prism, part, octant_signs(id))] = orient * w;
    }
  }
  return topo;
}

void parallel_for(int n, const std::function<void(int)>& job) {
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) workers = v;
  }
  workers = std::max(1, std::min(workers, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) job(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace hb
