#include "hb/octant_maps.hpp"

#include <algorithm>
#include <cmath>

#include "hb/error.hpp"

namespace hb {

complexd stereographic(const Vec3& s) {
  return complexd(s.x, s.y) / (1.0 + s.z);
}

Vec3 inverse_stereographic(const complexd& F) {
  if (!std::isfinite(F.real()) || !std::isfinite(F.imag())) return {0, 0, -1};
  const double u = F.real(), v = F.imag();
  const double D = 1.0 + u * u + v * v;
  return {2.0 * u / D, 2.0 * v / D, 2.0 / D - 1.0};
}

std::pair<Vec3, Vec3> inverse_stereographic_jacobian(const complexd& F) {
  const double u = F.real(), v = F.imag();
  const double D = 1.0 + u * u + v * v;
  const double D2 = D * D;
  const Vec3 dndu{2.0 * (D - 2.0 * u * u) / D2, -4.0 * u * v / D2, -4.0 * u / D2};
  const Vec3 dndv{-4.0 * u * v / D2, 2.0 * (D - 2.0 * v * v) / D2, -4.0 * v / D2};
  return {dndu, dndv};
}

ChartJet chart_embedding(Chart chart, double u, double v) {
  ChartJet j;
  if (chart == Chart::PolarOctant) {
    const double st = std::sin(u), ct = std::cos(u), cp = std::cos(v), sp = std::sin(v);
    j.value = {st * cp, st * sp, ct};
    j.du = {ct * cp, ct * sp, -st};
    j.dv = {-st * sp, st * cp, 0.0};
  } else {
    const complexd w = std::polar(u, v);
    j.value = inverse_stereographic(w);
    auto [dnu, dnv] = inverse_stereographic_jacobian(w);
    const complexd dwdu = std::polar(1.0, v);
    const complexd dwdv = complexd(0, 1) * w;
    j.du = dnu * dwdu.real() + dnv * dwdu.imag();
    j.dv = dnu * dwdv.real() + dnv * dwdv.imag();
  }
  return j;
}

std::array<double, 4> OctantField::domain() const {
  if (chart() == Chart::PolarOctant) return {0.0, kPi / 2.0, 0.0, kPi / 2.0};
  return {0.0, 1.0, 0.0, kPi / 2.0};
}

double OctantField::density(DensityKind kind, double u, double v) const {
  const ChartJet j = eval(u, v);
  if (kind == DensityKind::SignedArea) return -triple(j.value, j.du, j.dv);
  if (chart() == Chart::PolarOctant) {
    const double s2 = std::sin(u) * std::sin(u);
    return (norm2(j.du) + norm2(j.dv) / s2) * std::sin(u);
  }
  // Conformal chart: the metric factor cancels.
  return norm2(j.du) * u + norm2(j.dv) / u;
}

std::vector<QuadPatch> OctantField::density_patches(DensityKind kind, const ValueWeight* vweight,
                                                    const DomainWeight* dweight) const {
  const auto dom = domain();
  QuadPatch p;
  p.u0 = dom[0]; p.u1 = dom[1]; p.v0 = dom[2]; p.v1 = dom[3];
  p.breaks_u = breaks_u();
  p.breaks_v = breaks_v();
  p.integrand = [this, kind, vweight, dweight](double u, double v) {
    double d = density(kind, u, v);
    if (vweight) d *= (*vweight)(eval(u, v).value);
    if (dweight) d *= (*dweight)(u, v);
    return d;
  };
  return {p};
}

namespace {

// Chart curves of the octant edges: (u(alpha), v(alpha), du/dalpha, dv/dalpha).
struct EdgeCurve { double u, v, du, dv; };

EdgeCurve edge_curve(Chart chart, int axis, double alpha) {
  if (chart == Chart::PolarOctant) {
    switch (axis) {
      case 0: return {kPi / 2.0 - alpha, kPi / 2.0, -1.0, 0.0};  // y-hat to z-hat
      case 1: return {alpha, 0.0, 1.0, 0.0};                     // z-hat to x-hat
      default: return {kPi / 2.0, alpha, 0.0, 1.0};              // x-hat to y-hat
    }
  }
  switch (axis) {
    case 0: {  // w = i cos(alpha)/(1 + sin(alpha)), from i to 0
      const double r = std::cos(alpha) / (1.0 + std::sin(alpha));
      return {r, kPi / 2.0, -1.0 / (1.0 + std::sin(alpha)), 0.0};
    }
    case 1: {  // w = tan(alpha/2), from 0 to 1
      const double c = std::cos(alpha / 2.0);
      return {std::tan(alpha / 2.0), 0.0, 0.5 / (c * c), 0.0};
    }
    default:  // w = e^{i alpha}
      return {1.0, alpha, 0.0, 1.0};
  }
}

}  // namespace

EdgeJet OctantField::edge_trace(int axis, double alpha) const {
  const EdgeCurve c = edge_curve(chart(), axis, alpha);
  const ChartJet j = eval(c.u, c.v);
  return {j.value, j.du * c.du + j.dv * c.dv};
}

// ---------------------------------------------------------------------------
// RationalMap

RationalMap::RationalMap(Params p) : p_(std::move(p)) {
  if (p_.n % 2 == 0) fail(ErrorCode::InconsistentWrapping, "n must be odd");
  if (p_.lambda != 1 && p_.lambda != -1)
    fail(ErrorCode::InconsistentWrapping, "lambda must be +-1");
}

complexd RationalMap::f(const complexd& w) const {
  complexd val = static_cast<double>(p_.lambda) * std::pow(w, p_.n);
  for (const auto& [r, rho] : p_.real_zp) {
    const complexd w2 = w * w;
    const complexd factor = (w2 - r * r) / (r * r * w2 - 1.0);
    val *= (rho > 0) ? factor : 1.0 / factor;
  }
  for (const auto& [s, sig] : p_.imag_zp) {
    const complexd w2 = w * w;
    const complexd factor = (w2 + s * s) / (s * s * w2 + 1.0);
    val *= (sig > 0) ? factor : 1.0 / factor;
  }
  for (const auto& [t, tau] : p_.complex_zp) {
    const complexd w2 = w * w;
    const complexd t2 = t * t, tb2 = std::conj(t) * std::conj(t);
    const complexd factor = ((w2 - t2) * (w2 - tb2)) / ((t2 * w2 - 1.0) * (tb2 * w2 - 1.0));
    val *= (tau > 0) ? factor : 1.0 / factor;
  }
  return val;
}

complexd RationalMap::log_derivative(const complexd& w) const {
  complexd ld = static_cast<double>(p_.n) / w;
  for (const auto& [r, rho] : p_.real_zp)
    ld += static_cast<double>(rho) *
          (2.0 * w / (w * w - r * r) - 2.0 * r * r * w / (r * r * w * w - 1.0));
  for (const auto& [s, sig] : p_.imag_zp)
    ld += static_cast<double>(sig) *
          (2.0 * w / (w * w + s * s) - 2.0 * s * s * w / (s * s * w * w + 1.0));
  for (const auto& [t, tau] : p_.complex_zp) {
    const complexd t2 = t * t, tb2 = std::conj(t) * std::conj(t);
    ld += static_cast<double>(tau) *
          (2.0 * w / (w * w - t2) + 2.0 * w / (w * w - tb2) -
           2.0 * t2 * w / (t2 * w * w - 1.0) - 2.0 * tb2 * w / (tb2 * w * w - 1.0));
  }
  return ld;
}

complexd RationalMap::f_prime(const complexd& w) const { return f(w) * log_derivative(w); }

std::array<int, 3> RationalMap::edge_signs_closed_form() const {
  const int a = static_cast<int>(p_.real_zp.size());
  const int b = static_cast<int>(p_.imag_zp.size());
  const int ex = p_.lambda * ((a % 2 == 0) ? 1 : -1);
  const int half = (p_.n - 1) / 2;
  const int ey = p_.lambda * ((b % 2 == 0) ? 1 : -1) * ((half % 2 == 0) ? 1 : -1);
  const int ez = p_.n > 0 ? 1 : -1;
  return {ex, ey, ez};
}

std::array<int, 3> RationalMap::kinks_closed_form() const {
  const auto e = edge_signs_closed_form();
  const int a = static_cast<int>(p_.real_zp.size());
  const int b = static_cast<int>(p_.imag_zp.size());
  int sum_alt_rho = 0, sum_rho = 0;
  for (int j = 1; j <= a; ++j) {
    sum_alt_rho += ((j % 2 == 0) ? 1 : -1) * p_.real_zp[j - 1].second;
    sum_rho += p_.real_zp[j - 1].second;
  }
  int sum_alt_sig = 0, sum_sig = 0;
  for (int k = 1; k <= b; ++k) {
    sum_alt_sig += ((k % 2 == 0) ? 1 : -1) * p_.imag_zp[k - 1].second;
    sum_sig += p_.imag_zp[k - 1].second;
  }
  int sum_tau = 0;
  for (const auto& [t, tau] : p_.complex_zp) sum_tau += tau;

  // 2 k_x = -(-1)^b e_y (sum (-1)^k sigma_k + (1 - (-1)^b)/2 e_z), likewise k_y.
  const int ez = e[2];
  const int kx2 = -((b % 2 == 0) ? 1 : -1) * e[1] * (2 * sum_alt_sig + (1 - ((b % 2 == 0) ? 1 : -1)) * ez) / 2;
  const int ky2 = -((a % 2 == 0) ? 1 : -1) * e[0] * (2 * sum_alt_rho + (1 - ((a % 2 == 0) ? 1 : -1)) * ez) / 2;
  const int kz4 = (e[0] * e[1] - p_.n) - 2 * sum_rho - 2 * sum_sig - 4 * sum_tau;
  if (kx2 % 2 != 0 || ky2 % 2 != 0 || kz4 % 4 != 0)
    fail(ErrorCode::NonIntegerInvariant, "closed-form kink numbers are not integers");
  return {kx2 / 2, ky2 / 2, kz4 / 4};
}

double RationalMap::omega_closed_form() const {
  const int a = static_cast<int>(p_.real_zp.size());
  const int b = static_cast<int>(p_.imag_zp.size());
  const int c = static_cast<int>(p_.complex_zp.size());
  return -0.5 * (std::abs(p_.n) + 2 * (a + b) + 4 * c) * kPi;
}

OctantTopology RationalMap::topology_closed_form() const {
  OctantTopology t;
  t.e = edge_signs_closed_form();
  t.k = kinks_closed_form();
  t.omega = omega_closed_form();
  return t;
}

ChartJet RationalMap::eval(double u, double v) const {
  const complexd w = std::polar(u, v);
  const complexd F = f(w);
  const complexd Fp = f_prime(w);
  ChartJet j;
  j.value = inverse_stereographic(F);
  auto [dnu, dnv] = inverse_stereographic_jacobian(F);
  const complexd dFdu = Fp * std::polar(1.0, v);
  const complexd dFdv = Fp * complexd(0, 1) * w;
  j.du = dnu * dFdu.real() + dnv * dFdu.imag();
  j.dv = dnu * dFdv.real() + dnv * dFdv.imag();
  return j;
}

double RationalMap::density(DensityKind kind, double u, double v) const {
  const complexd w = std::polar(u, v);
  const complexd F = f(w);
  const complexd Fp = f_prime(w);
  const double a2 = std::norm(F);
  const double d = 1.0 + a2;
  const double dens = 4.0 * std::norm(Fp) / (d * d) * u;  // d^2 w = r dr dpsi
  if (!std::isfinite(dens)) return 0.0;                   // exactly at a pole node
  return kind == DensityKind::Energy ? dens : -dens;
}

std::vector<QuadPatch> RationalMap::density_patches(DensityKind kind, const ValueWeight* vweight,
                                                    const DomainWeight* dweight) const {
  return OctantField::density_patches(kind, vweight, dweight);
}

std::vector<double> RationalMap::breaks_u() const {
  std::vector<double> b;
  for (const auto& [r, rho] : p_.real_zp) b.push_back(r);
  for (const auto& [s, sig] : p_.imag_zp) b.push_back(s);
  for (const auto& [t, tau] : p_.complex_zp) b.push_back(std::abs(t));
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

std::vector<double> RationalMap::breaks_v() const {
  std::vector<double> b;
  for (const auto& [t, tau] : p_.complex_zp) b.push_back(std::arg(t));
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

EdgeJet RationalMap::edge_trace(int axis, double alpha) const {
  return OctantField::edge_trace(axis, alpha);
}

std::vector<double> RationalMap::edge_breaks(int axis) const {
  std::vector<double> b;
  if (axis == 1) {
    for (const auto& [r, rho] : p_.real_zp) b.push_back(2.0 * std::atan(r));
  } else if (axis == 0) {
    for (const auto& [s, sig] : p_.imag_zp) b.push_back(kPi / 2.0 - 2.0 * std::atan(s));
  } else {
    for (const auto& [t, tau] : p_.complex_zp) b.push_back(std::arg(t));
  }
  std::sort(b.begin(), b.end());
  return b;
}

double omega_star(const std::array<int, 3>& e, const std::array<int, 3>& k) {
  const int estar = e[0] * e[1] * e[2];
  const double ksum = std::abs(k[0]) + std::abs(k[1]) + std::abs(k[2]);
  return -2.0 * kPi * (ksum + 1.0 - 0.75 * estar);
}

RationalMap build_conformal_map(const std::array<int, 3>& e, const std::array<int, 3>& k) {
  const int estar = e[0] * e[1] * e[2];
  RationalMap::Params p;
  p.n = (2 - estar) * e[2];
  p.lambda = e[0];
  const int a = 2 * std::abs(k[1]);
  const int b = 2 * std::abs(k[0]);
  const int c = std::abs(k[2]) + (1 - estar) / 2;
  const int sgn_ky = (k[1] > 0) - (k[1] < 0);
  const int sgn_kx = (k[0] > 0) - (k[0] < 0);
  const int sgn_kz = (k[2] > 0) - (k[2] < 0);
  for (int j = 1; j <= a; ++j)
    p.real_zp.push_back({0.25 + j / (2.0 * a), -((j % 2 == 0) ? 1 : -1) * e[0] * sgn_ky});
  for (int kk = 1; kk <= b; ++kk)
    p.imag_zp.push_back({0.25 + kk / (2.0 * b), -((kk % 2 == 0) ? 1 : -1) * e[1] * sgn_kx});
  for (int l = 1; l <= c; ++l) {
    const double mod = std::sqrt(1.0 - 1.0 / (c + 1));
    const double arg = kPi * (0.125 + l / (4.0 * (c + 1.0)));
    const int tau = (l <= std::abs(k[2])) ? -sgn_kz : -e[2];
    p.complex_zp.push_back({std::polar(mod, arg), tau});
  }
  return RationalMap(std::move(p));
}

// ---------------------------------------------------------------------------
// SurgeredMap

SurgeredMap::SurgeredMap(RationalMap base, int m, complexd w0, double eps)
    : base_(std::move(base)), m_(m), w0_(w0), eps_(eps) {
  if (m_ == 0) fail(ErrorCode::ResidueViolation, "surgery covering count must be nonzero");
}

SurgeredMap::FJet SurgeredMap::f_jet(const complexd& w) const {
  const complexd d = w - w0_;
  const double rho = std::abs(d);
  FJet out;
  if (rho >= 2.0 * eps_) {
    out.F = base_.f(w);
    out.Fw = base_.f_prime(w);
    out.Fwb = 0.0;
    return out;
  }
  const complexd f0 = base_.f(w0_);
  const complexd db = std::conj(d);
  if (rho <= eps_) {
    if (m_ > 0) {
      out.F = f0 + std::pow(eps_, 2 * m_) * std::pow(db, -m_);
      out.Fw = 0.0;
      out.Fwb = -static_cast<double>(m_) * std::pow(eps_, 2 * m_) * std::pow(db, -m_ - 1);
    } else {
      out.F = f0 + std::pow(eps_, -2 * m_) * std::pow(d, m_);
      out.Fw = static_cast<double>(m_) * std::pow(eps_, -2 * m_) * std::pow(d, m_ - 1);
      out.Fwb = 0.0;
    }
    return out;
  }
  // Blend annulus: F = s f + (1-s) g with s = (|w-w0| - eps)/eps.
  const double s = (rho - eps_) / eps_;
  const complexd s_w = db / (2.0 * eps_ * rho);
  const complexd s_wb = d / (2.0 * eps_ * rho);
  const complexd fv = base_.f(w);
  const complexd fp = base_.f_prime(w);
  complexd g, g_w = 0.0, g_wb = 0.0;
  if (m_ > 0) {
    g = f0 + std::pow(d, m_);
    g_w = static_cast<double>(m_) * std::pow(d, m_ - 1);
  } else {
    g = f0 + std::pow(db, -m_);
    g_wb = static_cast<double>(-m_) * std::pow(db, -m_ - 1);
  }
  out.F = s * fv + (1.0 - s) * g;
  out.Fw = s_w * (fv - g) + s * fp + (1.0 - s) * g_w;
  out.Fwb = s_wb * (fv - g) + (1.0 - s) * g_wb;
  return out;
}

ChartJet SurgeredMap::eval(double u, double v) const {
  const complexd w = std::polar(u, v);
  const FJet fj = f_jet(w);
  ChartJet j;
  j.value = inverse_stereographic(fj.F);
  auto [dnu, dnv] = inverse_stereographic_jacobian(fj.F);
  const complexd dwdu = std::polar(1.0, v);
  const complexd dwdv = complexd(0, 1) * w;
  // dF = Fw dw + Fwb conj(dw)
  const complexd dFdu = fj.Fw * dwdu + fj.Fwb * std::conj(dwdu);
  const complexd dFdv = fj.Fw * dwdv + fj.Fwb * std::conj(dwdv);
  j.du = dnu * dFdu.real() + dnv * dFdu.imag();
  j.dv = dnu * dFdv.real() + dnv * dFdv.imag();
  return j;
}

namespace {

double fjet_density(const SurgeredMap::FJet& fj, DensityKind kind, double jac) {
  const double d = 1.0 + std::norm(fj.F);
  const double num = (kind == DensityKind::Energy) ? std::norm(fj.Fwb) + std::norm(fj.Fw)
                                                   : std::norm(fj.Fwb) - std::norm(fj.Fw);
  const double dens = 4.0 * num / (d * d) * jac;
  return std::isfinite(dens) ? dens : 0.0;
}

}  // namespace

double SurgeredMap::density(DensityKind kind, double u, double v) const {
  return fjet_density(f_jet(std::polar(u, v)), kind, u);
}

std::vector<QuadPatch> SurgeredMap::density_patches(DensityKind kind, const ValueWeight* vweight,
                                                    const DomainWeight* dweight) const {
  // Exact split: base map over all of Q, plus the correction localized in the
  // surgery disk, integrated in local polar coordinates about w0.
  std::vector<QuadPatch> patches = base_.density_patches(kind, vweight, dweight);
  QuadPatch disk;
  disk.u0 = 0.0;
  disk.u1 = 2.0 * eps_;
  disk.v0 = 0.0;
  disk.v1 = 2.0 * kPi;
  disk.breaks_u = {eps_};
  disk.integrand = [this, kind, vweight, dweight](double rho, double chi) {
    const complexd w = w0_ + std::polar(rho, chi);
    const FJet fj = f_jet(w);
    // Local polar area element: d^2 w = rho drho dchi.
    double dens = fjet_density(fj, kind, rho);
    SurgeredMap::FJet bj;
    bj.F = base_.f(w);
    bj.Fw = base_.f_prime(w);
    bj.Fwb = 0.0;
    double base_dens = fjet_density(bj, kind, rho);
    if (vweight) {
      dens *= (*vweight)(inverse_stereographic(fj.F));
      base_dens *= (*vweight)(inverse_stereographic(bj.F));
    }
    if (dweight) {
      const double wgt = (*dweight)(std::abs(w), std::arg(w));
      dens *= wgt;
      base_dens *= wgt;
    }
    return dens - base_dens;
  };
  patches.push_back(std::move(disk));
  return patches;
}

std::shared_ptr<OctantField> surgered_map(const OctantTopology& topo) {
  if (!octant_residue_ok(topo))
    fail(ErrorCode::ResidueViolation, "Omega is not an admissible multiple of pi/2");
  RationalMap base = build_conformal_map(topo.e, topo.k);
  const double ostar = omega_star(topo.e, topo.k);
  const double mreal = (topo.omega - ostar) / (4.0 * kPi);
  if (std::abs(mreal - std::round(mreal)) > 1e-9)
    fail(ErrorCode::ResidueViolation, "Omega - Omega_* is not a multiple of 4 pi");
  const int m = static_cast<int>(std::llround(mreal));
  if (m == 0) return std::make_shared<RationalMap>(std::move(base));

  // Regular point: interior lattice point of Q farthest from all zeros, poles
  // and the boundary.
  std::vector<complexd> zp = {complexd(0, 0)};
  for (const auto& [r, rho] : base.params().real_zp) zp.push_back(complexd(r, 0));
  for (const auto& [s, sig] : base.params().imag_zp) zp.push_back(complexd(0, s));
  for (const auto& [t, tau] : base.params().complex_zp) zp.push_back(t);

  complexd best_w0;
  double best_d = -1.0;
  for (int i = 1; i < 32; ++i)
    for (int j = 1; j < 32; ++j) {
      const complexd w(i / 32.0, j / 32.0);
      double d = std::min({w.real(), w.imag(), 1.0 - std::abs(w)});
      for (const auto& z : zp) d = std::min(d, std::abs(w - z));
      if (d > best_d) { best_d = d; best_w0 = w; }
    }
  if (best_d <= 0.0) fail(ErrorCode::NoRegularPoint, "no interior regular point found");
  const double eps = std::min(best_d / 4.0, 1.0 / 16.0);
  return std::make_shared<SurgeredMap>(std::move(base), m, best_w0, eps);
}

// ---------------------------------------------------------------------------
// ParametricMNField

ParametricMNField::ParametricMNField(int M, int N) : M_(M), N_(N) {
  if (M < 0 || N < 0) fail(ErrorCode::NonPositive, "M, N must be nonnegative");
}

ChartJet ParametricMNField::eval(double u, double v) const {
  const double ma = 4.0 * M_ + 1.0, nb = 4.0 * N_ + 1.0;
  const double a = ma * u, b = nb * v;
  const double sa = std::sin(a), ca = std::cos(a), sb = std::sin(b), cb = std::cos(b);
  ChartJet j;
  j.value = {sa * cb, sa * sb, ca};
  j.du = Vec3{ca * cb, ca * sb, -sa} * ma;
  j.dv = Vec3{-sa * sb, sa * cb, 0.0} * nb;
  return j;
}

double ParametricMNField::density(DensityKind kind, double u, double v) const {
  const double ma = 4.0 * M_ + 1.0, nb = 4.0 * N_ + 1.0;
  const double sa = std::sin(ma * u);
  if (kind == DensityKind::SignedArea) return -ma * nb * sa;
  const double st = std::sin(u);
  return (ma * ma + nb * nb * sa * sa / (st * st)) * st;
}

std::vector<QuadPatch> ParametricMNField::density_patches(DensityKind kind,
                                                          const ValueWeight* vweight,
                                                          const DomainWeight* dweight) const {
  return OctantField::density_patches(kind, vweight, dweight);
}

std::vector<double> ParametricMNField::breaks_u() const {
  std::vector<double> b;
  for (int j = 1; j < 4 * M_ + 1; ++j) b.push_back(j * kPi / 2.0 / (4 * M_ + 1));
  return b;
}

std::vector<double> ParametricMNField::breaks_v() const {
  std::vector<double> b;
  for (int l = 1; l < 4 * N_ + 1; ++l) b.push_back(l * kPi / 2.0 / (4 * N_ + 1));
  return b;
}

EdgeJet ParametricMNField::edge_trace(int axis, double alpha) const {
  return OctantField::edge_trace(axis, alpha);
}

PrismFieldSet mn_example_field(int M, int N) {
  return uniform_field_set(std::make_shared<ParametricMNField>(M, N));
}

PrismFieldSet uniform_field_set(const std::shared_ptr<OctantField>& f) {
  PrismFieldSet set;
  for (auto& slot : set.normalized) slot = f;
  return set;
}

Vec3 vertex_chart_direction(int vertex_id, const Vec3& s_global) {
  const auto a = octant_signs(vertex_id);
  return {-a[0] * s_global.x, -a[1] * s_global.y, -a[2] * s_global.z};
}

}  // namespace hb
