#include "hb/extension.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hb/assignment.hpp"
#include "hb/error.hpp"

namespace hb {

namespace {

std::pair<double, double> chart_coords(Chart chart, const Vec3& s) {
  if (chart == Chart::PolarOctant) {
    const double theta = std::acos(std::clamp(s.z, -1.0, 1.0));
    double phi = std::atan2(std::max(s.y, 0.0), std::max(s.x, 0.0));
    return {theta, std::clamp(phi, 0.0, kPi / 2.0)};
  }
  const complexd w = stereographic(s);
  return {std::abs(w), std::clamp(std::arg(w), 0.0, kPi / 2.0)};
}

// Chart displacement (du, dv) corresponding to a tangent displacement ds of
// the domain direction, via the embedding Gram matrix.
std::pair<double, double> chart_displacement(const ChartJet& emb, const Vec3& ds) {
  const double g11 = dot(emb.du, emb.du), g12 = dot(emb.du, emb.dv), g22 = dot(emb.dv, emb.dv);
  const double b1 = dot(emb.du, ds), b2 = dot(emb.dv, ds);
  const double det = g11 * g22 - g12 * g12;
  if (std::abs(det) < 1e-300) return {0.0, 0.0};
  return {(b1 * g22 - b2 * g12) / det, (b2 * g11 - b1 * g12) / det};
}

Vec3 reflect_to_chart(int vertex_id, const Vec3& s) { return vertex_chart_direction(vertex_id, s); }

}  // namespace

// ---------------------------------------------------------------------------
// ThetaTrace

ThetaTrace::ThetaTrace(const Prism& prism, const PrismFieldSet& fields, int axis, int tau)
    : prism_(&prism), fields_(&fields), axis_(axis), tau_(tau), frame_(face_frame(prism, axis, tau)) {
  const double lp = frame_.lp, lq = frame_.lq;

  auto quadrant_vertex = [&](int q) {
    static constexpr int sp[4] = {1, -1, -1, 1};
    static constexpr int sq[4] = {1, 1, -1, -1};
    const Vec3 v = frame_.n * frame_.ln + frame_.p * (sp[q] * lp) + frame_.q * (sq[q] * lq);
    return Prism::vertex_id(v.x > 0 ? 1 : -1, v.y > 0 ? 1 : -1, v.z > 0 ? 1 : -1);
  };

  auto value_in_quadrant = [&](double phi, int q) {
    const double R = lp * lq / (lq * std::abs(std::cos(phi)) + lp * std::abs(std::sin(phi)));
    const Vec3 c = frame_.n * frame_.ln + (frame_.p * std::cos(phi) + frame_.q * std::sin(phi)) * R;
    const int vid = quadrant_vertex(q);
    const Vec3 v = prism_->vertex(vid);
    const Vec3 sg = normalized(c - v);
    const Vec3 sc = reflect_to_chart(vid, sg);
    const OctantField& f = *fields_->normalized[vid];
    const auto [u, vv] = chart_coords(f.chart(), sc);
    return f.eval(u, vv).value;
  };

  // Corner continuity across quadrant seams.
  for (int q = 0; q < 4; ++q) {
    const double phi = q * kPi / 2.0;
    const Vec3 from_prev = value_in_quadrant(phi == 0 ? 2.0 * kPi : phi, (q + 3) % 4);
    const Vec3 from_this = value_in_quadrant(phi, q);
    if (norm(from_prev - from_this) > 1e-6)
      fail(ErrorCode::TraceMismatch, "octant traces disagree at a rhombus corner");
  }

  const Vec3 n0 = value_in_quadrant(0.0, 0);
  if (std::abs(dot(n0, frame_.q)) < 1.0 - 1e-6)
    fail(ErrorCode::TraceMismatch, "trace at phi = 0 is not along the expected edge direction");
  eps_ = dot(n0, frame_.q) > 0 ? 1 : -1;

  auto raw_theta = [&](double phi) {
    const int q = std::min(3, static_cast<int>(std::floor(phi / (kPi / 2.0))) % 4);
    const Vec3 n = value_in_quadrant(phi, q);
    return std::atan2(dot(n, frame_.p), eps_ * dot(n, frame_.q));
  };

  // Unwrap on a refining sample grid; jumps above pi/4 trigger refinement.
  const int n0samples = 2048;
  std::vector<std::pair<double, double>> raw;
  raw.reserve(n0samples + 1);
  for (int i = 0; i <= n0samples; ++i) {
    const double phi = 2.0 * kPi * i / n0samples;
    raw.push_back({phi, raw_theta(phi)});
  }
  for (int pass = 0; pass < 16; ++pass) {
    std::vector<std::pair<double, double>> refined;
    bool changed = false;
    for (size_t i = 0; i + 1 < raw.size(); ++i) {
      refined.push_back(raw[i]);
      if (std::abs(std::remainder(raw[i + 1].second - raw[i].second, 2.0 * kPi)) > kPi / 4.0) {
        const double mid = (raw[i].first + raw[i + 1].first) / 2.0;
        refined.push_back({mid, raw_theta(mid)});
        changed = true;
      }
    }
    refined.push_back(raw.back());
    raw = std::move(refined);
    if (!changed) break;
    if (pass == 15) fail(ErrorCode::WindingAmbiguous, "Theta unwrapping did not converge");
  }
  samples_.resize(raw.size());
  double acc = raw[0].second;  // == 0 up to roundoff, by the eps choice
  samples_[0] = {raw[0].first, acc};
  for (size_t i = 1; i < raw.size(); ++i) {
    acc += std::remainder(raw[i].second - raw[i - 1].second, 2.0 * kPi);
    samples_[i] = {raw[i].first, acc};
  }
  if (std::abs(samples_.back().second - samples_.front().second) > 1e-6)
    fail(ErrorCode::WindingNonzero, "Theta winds by a nonzero multiple of 2 pi");
}

std::pair<Vec3, Vec3> ThetaTrace::trace(double phi) const {
  phi = std::fmod(phi, 2.0 * kPi);
  if (phi < 0) phi += 2.0 * kPi;
  const double lp = frame_.lp, lq = frame_.lq;
  const int q = std::min(3, static_cast<int>(std::floor(phi / (kPi / 2.0))) % 4);
  static constexpr int sp[4] = {1, -1, -1, 1};
  static constexpr int sq[4] = {1, 1, -1, -1};
  const Vec3 vpos = frame_.n * frame_.ln + frame_.p * (sp[q] * lp) + frame_.q * (sq[q] * lq);
  const int vid = Prism::vertex_id(vpos.x > 0 ? 1 : -1, vpos.y > 0 ? 1 : -1, vpos.z > 0 ? 1 : -1);

  const double cphi = std::cos(phi), sphi = std::sin(phi);
  const double D = lq * std::abs(cphi) + lp * std::abs(sphi);
  const double Dp = -lq * (cphi >= 0 ? 1.0 : -1.0) * sphi + lp * (sphi >= 0 ? 1.0 : -1.0) * cphi;
  const double R = lp * lq / D;
  const double Rp = -R * Dp / D;
  const Vec3 dir = frame_.p * cphi + frame_.q * sphi;
  const Vec3 dir_p = frame_.p * (-sphi) + frame_.q * cphi;
  const Vec3 c = frame_.n * frame_.ln + dir * R;
  const Vec3 dc = dir * Rp + dir_p * R;

  const Vec3 v = prism_->vertex(vid);
  const Vec3 rel = c - v;
  const double rn = norm(rel);
  const Vec3 sg = rel / rn;
  const Vec3 dsg = (dc - sg * dot(sg, dc)) / rn;

  const Vec3 sc = reflect_to_chart(vid, sg);
  const Vec3 dsc = reflect_to_chart(vid, dsg);
  const OctantField& f = *fields_->normalized[vid];
  const auto [u, vv] = chart_coords(f.chart(), sc);
  const ChartJet emb = chart_embedding(f.chart(), u, vv);
  const auto [du, dv] = chart_displacement(emb, dsc);
  const ChartJet jet = f.eval(u, vv);
  return {jet.value, jet.du * du + jet.dv * dv};
}

double ThetaTrace::theta(double phi) const {
  const auto [n, dn] = trace(phi);
  const double raw = std::atan2(dot(n, frame_.p), eps_ * dot(n, frame_.q));
  // Nearest sample fixes the branch.
  auto it = std::lower_bound(samples_.begin(), samples_.end(), std::make_pair(phi, -1e300));
  if (it == samples_.end()) --it;
  if (it != samples_.begin() && std::abs(std::prev(it)->first - phi) < std::abs(it->first - phi))
    --it;
  return raw + 2.0 * kPi * std::round((it->second - raw) / (2.0 * kPi));
}

double ThetaTrace::theta_prime(double phi) const {
  const auto [n, dn] = trace(phi);
  const double st = dot(n, frame_.p), ct = eps_ * dot(n, frame_.q);
  // n = sin(Theta) p + eps cos(Theta) q; project dn on the rotation direction.
  return dot(dn, frame_.p) * ct - eps_ * dot(dn, frame_.q) * st;
}

double sigma_param(double edge_energy_sum) {
  if (edge_energy_sum < kPi / 8.0 - 1e-12)
    fail(ErrorCode::EdgeEnergyTooSmall,
         "face edge energy sum " + std::to_string(edge_energy_sum) + " below pi/8");
  return 1.0 / std::sqrt(kPi * edge_energy_sum);
}

QuadResult energy_X(const OctantField& normalized, const Prism& prism, int vertex_id,
                    const QuadratureSpec& spec) {
  const CleavedFace cf = cleaved_face(prism, vertex_id);
  const Vec3 C = cf.normal_unnormalized;
  const Chart ch = normalized.chart();
  DomainWeight weight = [C, ch, vertex_id](double u, double v) {
    const Vec3 sc = chart_embedding(ch, u, v).value;
    const Vec3 sg = vertex_chart_direction(vertex_id, sc);  // T_a is an involution
    return 1.0 / std::abs(dot(C, sg));
  };
  return integrate_patches(normalized.density_patches(DensityKind::Energy, nullptr, &weight),
                           spec);
}

namespace {

// Integrand of the exact Step-2 energy in the vertex chart: the trace on the
// cleaved face, made constant along rays through the origin.
double y_integrand(const OctantField& field, const ChartJet& jet, Chart ch, const Prism& prism,
                   int vertex_id, const Vec3& C, double u, double v) {
  const ChartJet emb = chart_embedding(ch, u, v);
  const Vec3 sg = vertex_chart_direction(vertex_id, emb.value);
  const Vec3 sgu = vertex_chart_direction(vertex_id, emb.du);
  const Vec3 sgv = vertex_chart_direction(vertex_id, emb.dv);

  const double t = dot(C, sg);
  const double r = 1.0 / std::abs(t);
  const double sgn_t = t >= 0 ? 1.0 : -1.0;
  const double ru = -sgn_t * dot(C, sgu) / (t * t);
  const double rv = -sgn_t * dot(C, sgv) / (t * t);

  const Vec3 vert = prism.vertex(vertex_id);
  const Vec3 c = vert + sg * r;
  const Vec3 cu = sg * ru + sgu * r;
  const Vec3 cv = sg * rv + sgv * r;
  const double cn = norm(c);
  const Vec3 m = c / cn;
  const Vec3 mu = (cu - m * dot(m, cu)) / cn;
  const Vec3 mv = (cv - m * dot(m, cv)) / cn;

  const double g11 = dot(mu, mu), g12 = dot(mu, mv), g22 = dot(mv, mv);
  const double det = g11 * g22 - g12 * g12;
  if (det < 1e-300) return 0.0;
  const double t2 = dot(jet.du, jet.du) * g22 - 2.0 * dot(jet.du, jet.dv) * g12 +
                    dot(jet.dv, jet.dv) * g11;
  return cn * t2 / std::sqrt(det);
}

}  // namespace

QuadResult energy_Y(const OctantField& normalized, const Prism& prism, int vertex_id,
                    const QuadratureSpec& spec) {
  const CleavedFace cf = cleaved_face(prism, vertex_id);
  const Vec3 C = cf.normal_unnormalized;
  const Chart ch = normalized.chart();
  const auto dom = normalized.domain();

  std::vector<QuadPatch> patches;
  QuadPatch main;
  main.u0 = dom[0];
  main.u1 = dom[1];
  main.v0 = dom[2];
  main.v1 = dom[3];
  main.breaks_u = normalized.breaks_u();
  main.breaks_v = normalized.breaks_v();

  const auto* surg = dynamic_cast<const SurgeredMap*>(&normalized);
  const OctantField& bulk = surg ? static_cast<const OctantField&>(surg->base()) : normalized;
  main.integrand = [&bulk, ch, &prism, vertex_id, C](double u, double v) {
    return y_integrand(bulk, bulk.eval(u, v), ch, prism, vertex_id, C, u, v);
  };
  patches.push_back(main);

  if (surg) {
    QuadPatch disk;
    disk.u0 = 0.0;
    disk.u1 = 2.0 * surg->radius();
    disk.v0 = 0.0;
    disk.v1 = 2.0 * kPi;
    disk.breaks_u = {surg->radius()};
    const complexd w0 = surg->center();
    disk.integrand = [surg, ch, &prism, vertex_id, C, w0](double rho, double chi) {
      const complexd w = w0 + std::polar(rho, chi);
      const double u = std::abs(w), v = std::arg(w);
      const double jac = (u > 1e-300) ? rho / u : 0.0;
      const double with = y_integrand(*surg, surg->eval(u, v), ch, prism, vertex_id, C, u, v);
      const double without =
          y_integrand(surg->base(), surg->base().eval(u, v), ch, prism, vertex_id, C, u, v);
      return (with - without) * jac;
    };
    patches.push_back(std::move(disk));
  }
  return integrate_patches(patches, spec);
}

ZEnergy energy_Z(const Prism& prism, const ThetaTrace& theta, double sigma,
                 const QuadratureSpec& spec) {
  const FaceFrame fr = face_frame(prism, theta.axis(), theta.tau());
  const double ln = fr.ln, lp = fr.lp, lq = fr.lq;

  // gamma = Phi((1-h)/sigma) Phi((1-xi)/sigma) pi/2, Phi(s) = min(s, 1).
  auto Phi = [](double s) { return std::min(s, 1.0); };
  auto gamma = [&](double h, double xi) {
    return Phi((1.0 - h) / sigma) * Phi((1.0 - xi) / sigma) * kPi / 2.0;
  };
  auto gamma_h = [&](double h, double xi) {
    if (h < 1.0 - sigma) return 0.0;
    return -(kPi / (2.0 * sigma)) * Phi((1.0 - xi) / sigma);
  };
  auto gamma_xi = [&](double h, double xi) {
    if (xi < 1.0 - sigma) return 0.0;
    return -(kPi / (2.0 * sigma)) * Phi((1.0 - h) / sigma);
  };

  const std::vector<double> hx_breaks = {1.0 - sigma};
  QuadratureSpec spec2 = spec;
  auto int2 = [&](const std::function<double(double, double)>& f) {
    return integrate_2d(f, 0, 1, 0, 1, hx_breaks, hx_breaks, spec2);
  };
  const QuadResult W_cos = int2([&](double h, double xi) {
    const double cg = std::cos(gamma(h, xi));
    return cg * cg * xi;
  });
  const QuadResult W_g2h = int2([&](double h, double xi) {
    const double gh = gamma_h(h, xi);
    return h * h * gh * gh * xi;
  });
  const QuadResult W_g3 = int2([&](double h, double xi) {
    return h * gamma_h(h, xi) * gamma_xi(h, xi) * xi * xi;
  });
  const QuadResult W_gx2_x = int2([&](double h, double xi) {
    const double gx = gamma_xi(h, xi);
    return gx * gx * xi;
  });
  const QuadResult W_cos_x3 = int2([&](double h, double xi) {
    const double cg = std::cos(gamma(h, xi));
    return cg * cg * xi * xi * xi;
  });
  const QuadResult W_gx2_x3 = int2([&](double h, double xi) {
    const double gx = gamma_xi(h, xi);
    return gx * gx * xi * xi * xi;
  });

  auto RoverD = [&](double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    const double D = lq * std::abs(c) + lp * std::abs(s);
    const double Dp = -lq * (c >= 0 ? 1.0 : -1.0) * s + lp * (s >= 0 ? 1.0 : -1.0) * c;
    const double R = lp * lq / D;
    return std::make_pair(R, -Dp / D);  // (R, R'/R)
  };
  const std::vector<double> phi_breaks = {kPi / 2.0, kPi, 3.0 * kPi / 2.0};
  auto int1 = [&](const std::function<double(double)>& f) {
    return integrate_1d(f, 0.0, 2.0 * kPi, phi_breaks, spec2);
  };
  const QuadResult P_tp2 = int1([&](double phi) {
    const double tp = theta.theta_prime(phi);
    return tp * tp;
  });
  const QuadResult P_R2 = int1([&](double phi) {
    const auto [R, rr] = RoverD(phi);
    return R * R;
  });
  const QuadResult P_rr_ttp = int1([&](double phi) {
    const auto [R, rr] = RoverD(phi);
    return rr * theta.theta(phi) * theta.theta_prime(phi);
  });
  const QuadResult P_1pr2_t2 = int1([&](double phi) {
    const auto [R, rr] = RoverD(phi);
    const double th = theta.theta(phi);
    return (1.0 + rr * rr) * th * th;
  });
  const QuadResult P_1pr2 = int1([&](double phi) {
    const auto [R, rr] = RoverD(phi);
    return 1.0 + rr * rr;
  });
  const QuadResult P_R2_t2 = int1([&](double phi) {
    const auto [R, rr] = RoverD(phi);
    const double th = theta.theta(phi);
    return R * R * th * th;
  });

  ZEnergy z;
  z.sigma = sigma;
  z.terms[0] = ln * W_cos.value * P_tp2.value;
  z.terms[1] = (1.0 / ln) * W_g2h.value * P_R2.value;
  z.terms[2] = -(2.0 / ln) * W_g3.value * P_R2.value;
  z.terms[3] = -2.0 * theta.epsilon() * ln * W_cos.value * P_rr_ttp.value;
  z.terms[4] = ln * W_cos.value * P_1pr2_t2.value + ln * W_gx2_x.value * P_1pr2.value +
               (1.0 / ln) * W_cos_x3.value * P_R2_t2.value +
               (1.0 / ln) * W_gx2_x3.value * P_R2.value;
  for (double t : z.terms) z.total += t;
  z.error = ln * (W_cos.error * P_tp2.value + W_cos.value * P_tp2.error) +
            W_g2h.error + W_g3.error + P_rr_ttp.error + P_1pr2_t2.error + P_R2_t2.error;
  return z;
}

UpperBoundReport extend_and_bound(const Prism& prism, const SectorPartition& part,
                                  const PrismFieldSet& fields,
                                  const std::optional<std::array<OctantTopology, 8>>& octants,
                                  const QuadratureSpec& spec) {
  UpperBoundReport rep;
  rep.kappa = prism.aspect_ratio();

  // Shared-edge continuity across vertex fields: the two traces meet at the
  // edge midpoint with the same axis-aligned value.
  for (int a = 0; a < 8; ++a)
    for (int j = 0; j < 3; ++j) {
      const int b = a ^ (1 << j);
      if (b < a) continue;
      Vec3 axis{0, 0, 0};
      axis[j] = 1.0;
      Vec3 va, vb;
      for (int side = 0; side < 2; ++side) {
        const int vid = side == 0 ? a : b;
        const OctantField& f = *fields.normalized[vid];
        const auto [u, v] = chart_coords(f.chart(), axis);
        (side == 0 ? va : vb) = f.eval(u, v).value;
      }
      if (norm(va - vb) > 1e-6)
        fail(ErrorCode::TraceMismatch, "vertex fields disagree along a shared edge");
    }

  // Per distinct normalized field: E2, E1, E_X, E_Y (both Step-1/2 energies
  // depend on the vertex only through the chart, hence are shared).
  struct PerField {
    QuadResult e2;
    std::array<QuadResult, 3> e1;
    QuadResult ex, ey;
  };
  std::map<const OctantField*, PerField> per_field;
  std::vector<const OctantField*> distinct;
  for (int a = 0; a < 8; ++a) {
    const OctantField* f = fields.normalized[a].get();
    if (!per_field.count(f)) {
      per_field[f] = {};
      distinct.push_back(f);
    }
  }
  std::vector<std::exception_ptr> field_err(distinct.size());
  parallel_for(static_cast<int>(distinct.size()), [&](int i) {
    try {
      const OctantField* f = distinct[i];
      PerField pf;
      pf.e2 = energy_E2(*f, spec);
      for (int j = 0; j < 3; ++j) pf.e1[j] = energy_E1(*f, j, spec);
      pf.ex = energy_X(*f, prism, 0, spec);
      pf.ey = energy_Y(*f, prism, 0, spec);
      per_field[f] = pf;
    } catch (...) {
      field_err[i] = std::current_exception();
    }
  });
  for (const auto& ep : field_err)
    if (ep) std::rethrow_exception(ep);

  double err = 0.0;
  for (int a = 0; a < 8; ++a) {
    const PerField& pf = per_field[fields.normalized[a].get()];
    rep.E2[a] = pf.e2.value;
    for (int j = 0; j < 3; ++j) rep.E1[a][j] = pf.e1[j].value;
    rep.EX[a] = pf.ex.value;
    rep.EY[a] = pf.ey.value;
    err += pf.e2.error + pf.ex.error + pf.ey.error;
  }

  // Face pyramids.
  std::array<ZEnergy, 6> zres;
  std::array<std::exception_ptr, 6> zerr;
  parallel_for(6, [&](int slot) {
    const int axis = slot / 2;
    const int tau = (slot % 2) ? 1 : -1;
    try {
      ThetaTrace th(prism, fields, axis, tau);
      double esum = 0.0;
      for (int a = 0; a < 8; ++a) {
        const auto sg = prism.vertex_signs(a);
        if (sg[axis] != tau) continue;
        esum += per_field[fields.normalized[a].get()].e1[axis].value;
      }
      const double sg = sigma_param(esum);
      zres[slot] = energy_Z(prism, th, sg, spec);
    } catch (...) {
      zerr[slot] = std::current_exception();
    }
  });
  for (int slot = 0; slot < 6; ++slot) {
    if (zerr[slot]) std::rethrow_exception(zerr[slot]);
    rep.EZ[slot] = zres[slot];
    rep.sigma[slot] = zres[slot].sigma;
    err += zres[slot].error;
  }

  for (int a = 0; a < 8; ++a) rep.E_total += rep.EX[a] + rep.EY[a];
  for (int s = 0; s < 6; ++s) rep.E_total += rep.EZ[s].total;
  rep.quadrature_error = err;

  TangentTopology topo = octants ? prism_topology_from_octants(prism, part, *octants)
                                 : numeric_prism_topology(prism, part, fields, spec);
  rep.E_minus = lower_bound_energy(prism, part, topo).E_minus;
  rep.ratio = rep.E_minus > 0 ? rep.E_total / rep.E_minus : 0.0;

  double fsum = 0.0;
  for (int a = 0; a < 8; ++a) {
    fsum += rep.E2[a];
    for (int j = 0; j < 3; ++j) fsum += std::sqrt(std::max(0.0, rep.E1[a][j]));
  }
  const double kappa3 = rep.kappa * rep.kappa * rep.kappa;
  rep.functional = kappa3 * (2.0 * prism.lz()) * fsum;
  return rep;
}

}  // namespace hb
