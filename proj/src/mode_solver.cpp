#include "wgmkit/mode_solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "wgmkit/bessel.hpp"
#include "wgmkit/constants.hpp"
#include "wgmkit/errors.hpp"

namespace wgm::modes {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kQuadTol = 1e-9;
constexpr int kQuadMaxLevel = 7;
// Exterior integration reach when there is no shield: the pattern has fallen
// to e^-45 of its rim value there, far below double precision of the energy.
constexpr double kDecayLengths = 45.0;

// 12-point Gauss-Legendre nodes/weights on [-1, 1] (abscissae symmetric).
constexpr std::array<double, 6> kGlNode = {
    0.1252334085114689, 0.3678314989981802, 0.5873179542866175,
    0.7699026741943047, 0.9041172563704749, 0.9815606342467192};
constexpr std::array<double, 6> kGlWeight = {
    0.2491470458134028, 0.2334925365383548, 0.2031674267230659,
    0.1600783285433462, 0.1069393259953184, 0.0471753363865118};

struct CharTerms {
  double value = kNaN;
  double scale = kNaN;
};

double shield_rho(const ModeSpec& spec, double kappa) {
  if (!spec.shield_radius_m) return 0.0;
  const double ws = kappa * (*spec.shield_radius_m);
  return bessel::cyl_k(spec.azimuthal_m, ws) / bessel::cyl_i(spec.azimuthal_m, ws);
}

// F(f) = eps_par*J'(u)/(u J(u)) - (kappa^2/gamma_out^2) * psi'(w)/(w psi(w)),
// psi = K - rho*I the decaying exterior shape (rho = 0 without a shield).
// The vacuum transverse operator gamma_out^2 = k0^2 - kz^2 stays in the
// admittance prefactor while the radial decay uses the local constant
// kappa^2 = m^2/a^2 + kz^2 - k0^2; this matching reproduces the measured
// band to a couple of percent (see README).
CharTerms char_terms(const ModeSpec& spec, double f_hz) {
  const int m = spec.azimuthal_m;
  const double a = spec.radius_m;
  const double kz = kPi / spec.height_m;
  const double k0 = 2.0 * kPi * f_hz / kSpeedOfLight;
  const double k1sq = spec.eps_par * k0 * k0 - (spec.eps_par / spec.eps_perp) * kz * kz;
  const double kapsq = (m / a) * (m / a) + kz * kz - k0 * k0;
  const double g2out = k0 * k0 - kz * kz;
  if (!(k1sq > 0.0) || !(kapsq > 0.0) || g2out == 0.0) return {};

  const double u = std::sqrt(k1sq) * a;
  const double w = std::sqrt(kapsq) * a;
  const auto j = bessel::cyl_j_pair(m, u);
  if (j.value == 0.0) return {};
  const auto kb = bessel::cyl_k_pair(m, w);
  double psi = kb.value, dpsi = kb.deriv;
  if (spec.shield_radius_m) {
    const double rho = shield_rho(spec, std::sqrt(kapsq));
    const auto ib = bessel::cyl_i_pair(m, w);
    psi -= rho * ib.value;
    dpsi -= rho * ib.deriv;
  }
  if (psi == 0.0) return {};

  const double t1 = spec.eps_par * j.deriv / (u * j.value);
  const double t2 = -(kapsq / g2out) * dpsi / (w * psi);
  return {t1 + t2, std::abs(t1) + std::abs(t2)};
}

double isotropic_terms(const ModeSpec& spec, double f_hz) {
  const int m = spec.azimuthal_m;
  const double a = spec.radius_m;
  const double eps = spec.eps_par;  // == eps_perp by contract
  const double kz = kPi / spec.height_m;
  const double k0 = 2.0 * kPi * f_hz / kSpeedOfLight;
  const double k1sq = eps * k0 * k0 - kz * kz;
  const double kapsq = (m / a) * (m / a) + kz * kz - k0 * k0;
  const double g2out = k0 * k0 - kz * kz;
  if (!(k1sq > 0.0) || !(kapsq > 0.0) || g2out == 0.0) return kNaN;
  const double u = std::sqrt(k1sq) * a;
  const double w = std::sqrt(kapsq) * a;
  const auto j = bessel::cyl_j_pair(m, u);
  const auto kb = bessel::cyl_k_pair(m, w);
  if (j.value == 0.0 || kb.value == 0.0) return kNaN;
  return eps * j.deriv / (u * j.value) - (kapsq / g2out) * kb.deriv / (w * kb.value);
}

// Frequency whose interior radial argument k1*a equals u.
double f_of_u(const ModeSpec& spec, double u) {
  const double kz = kPi / spec.height_m;
  const double k1 = u / spec.radius_m;
  const double k0sq = (k1 * k1 + (spec.eps_par / spec.eps_perp) * kz * kz) / spec.eps_par;
  return kSpeedOfLight * std::sqrt(k0sq) / (2.0 * kPi);
}

struct UnitEnergies {
  double ue_par_crystal = 0.0;
  double ue_perp_crystal = 0.0;
  double ue_total = 0.0;
  double um_crystal = 0.0;
  double um_total = 0.0;
};

// Radial amplitude profiles (z factors stripped) at radius r.
struct RadialProfile {
  double e_z = 0.0, e_r = 0.0, e_phi = 0.0, h_r = 0.0, h_phi = 0.0;
};

RadialProfile radial_profile(const ModeSolution& s, double r) {
  RadialProfile p;
  const int m = s.spec.azimuthal_m;
  const double om_eps0 = 2.0 * kPi * s.f_res_hz * kVacuumPermittivity;
  double psi = 0.0, dpsi = 0.0, g2 = 1.0, et = 1.0;
  if (r <= s.spec.radius_m) {
    const auto j = bessel::cyl_j_pair(m, s.k_rho * r);
    psi = j.value;
    dpsi = s.k_rho * j.deriv;
    g2 = s.gamma2_in;
    et = s.spec.eps_perp;
  } else {
    if (s.spec.shield_radius_m && r >= *s.spec.shield_radius_m) return p;
    const auto kb = bessel::cyl_k_pair(m, s.decay * r);
    psi = kb.value;
    dpsi = s.decay * kb.deriv;
    if (s.shield_mix != 0.0) {
      const auto ib = bessel::cyl_i_pair(m, s.decay * r);
      psi -= s.shield_mix * ib.value;
      dpsi -= s.shield_mix * s.decay * ib.deriv;
    }
    psi *= s.exterior_coeff;
    dpsi *= s.exterior_coeff;
    g2 = s.gamma2_out;
    et = 1.0;
  }
  p.e_z = psi;
  p.e_r = -(s.k_z / g2) * dpsi;
  p.e_phi = r > 0.0 ? (s.k_z * m / (g2 * r)) * psi : 0.0;
  p.h_phi = om_eps0 * et * dpsi / g2;
  p.h_r = r > 0.0 ? om_eps0 * et * (m / r) * psi / g2 : 0.0;
  return p;
}

double exterior_extent(const ModeSolution& s) {
  if (s.spec.shield_radius_m) return *s.spec.shield_radius_m;
  return s.spec.radius_m + kDecayLengths / s.decay;
}

// Tensor-product Gauss-Legendre energies at a given refinement level:
// `panels` 12-point panels per radial region, `panels`*12 z points for the
// cos^2/sin^2 axial factors.
UnitEnergies integrate_unit_energies(const ModeSolution& s, int panels) {
  const double a = s.spec.radius_m;
  const double r_out = exterior_extent(s);
  const double half_l = 0.5 * s.spec.height_m;

  // Axial integrals of cos^2(kz z) and sin^2(kz z) over the full height.
  double icos = 0.0, isin = 0.0;
  {
    const double h = s.spec.height_m / panels;
    for (int p = 0; p < panels; ++p) {
      const double zc = -half_l + (p + 0.5) * h;
      for (std::size_t g = 0; g < kGlNode.size(); ++g) {
        for (double sign : {-1.0, 1.0}) {
          const double z = zc + sign * 0.5 * h * kGlNode[g];
          const double wt = 0.5 * h * kGlWeight[g];
          const double cz = std::cos(s.k_z * z);
          icos += wt * cz * cz;
          isin += wt * (1.0 - cz * cz);
        }
      }
    }
  }

  // Radial integrals, weighted by r, split by region and component family.
  double ez2_in = 0.0, et2_in = 0.0, h2_in = 0.0;
  double ez2_out = 0.0, et2_out = 0.0, h2_out = 0.0;
  for (int region = 0; region < 2; ++region) {
    const double r0 = region == 0 ? 0.0 : a;
    const double r1 = region == 0 ? a : r_out;
    const double h = (r1 - r0) / panels;
    for (int p = 0; p < panels; ++p) {
      const double rc = r0 + (p + 0.5) * h;
      for (std::size_t g = 0; g < kGlNode.size(); ++g) {
        for (double sign : {-1.0, 1.0}) {
          const double r = rc + sign * 0.5 * h * kGlNode[g];
          const double wt = 0.5 * h * kGlWeight[g] * r;
          const RadialProfile pr = radial_profile(s, r);
          const double ez2 = pr.e_z * pr.e_z;
          const double et2 = pr.e_r * pr.e_r + pr.e_phi * pr.e_phi;
          const double h2 = pr.h_r * pr.h_r + pr.h_phi * pr.h_phi;
          if (region == 0) {
            ez2_in += wt * ez2;
            et2_in += wt * et2;
            h2_in += wt * h2;
          } else {
            ez2_out += wt * ez2;
            et2_out += wt * et2;
            h2_out += wt * h2;
          }
        }
      }
    }
  }

  const double pref_e = 0.25 * kVacuumPermittivity * 2.0 * kPi;
  const double pref_m = 0.25 * kVacuumPermeability * 2.0 * kPi;
  UnitEnergies u;
  u.ue_par_crystal = pref_e * s.spec.eps_par * ez2_in * icos;
  u.ue_perp_crystal = pref_e * s.spec.eps_perp * et2_in * isin;
  u.ue_total = u.ue_par_crystal + u.ue_perp_crystal +
               pref_e * (ez2_out * icos + et2_out * isin);
  u.um_crystal = pref_m * h2_in * icos;
  u.um_total = u.um_crystal + pref_m * h2_out * icos;
  return u;
}

struct ConvergedEnergies {
  UnitEnergies u;
  double rel_change = 0.0;
};

double rel_diff(double x, double y) {
  const double denom = std::max(std::abs(x), std::abs(y));
  return denom > 0.0 ? std::abs(x - y) / denom : 0.0;
}

ConvergedEnergies converge_energies(const ModeSolution& s) {
  UnitEnergies prev = integrate_unit_energies(s, 8);
  for (int level = 1; level <= kQuadMaxLevel; ++level) {
    const UnitEnergies cur = integrate_unit_energies(s, 8 << level);
    double change = std::max({rel_diff(prev.ue_total, cur.ue_total),
                              rel_diff(prev.um_total, cur.um_total),
                              rel_diff(prev.ue_par_crystal, cur.ue_par_crystal),
                              rel_diff(prev.ue_perp_crystal, cur.ue_perp_crystal),
                              rel_diff(prev.um_crystal, cur.um_crystal)});
    if (change < kQuadTol) return {cur, change};
    prev = cur;
  }
  throw QuadratureError("mode energies: quadrature did not reach " +
                        std::to_string(kQuadTol) + " after doubling to level " +
                        std::to_string(kQuadMaxLevel));
}

}  // namespace

void ModeSpec::validate() const {
  if (azimuthal_m < 1) throw std::domain_error("mode spec: m must be >= 1");
  if (!(radius_m > 0.0) || !std::isfinite(radius_m))
    throw std::domain_error("mode spec: radius must be positive");
  if (!(height_m > 0.0) || !std::isfinite(height_m))
    throw std::domain_error("mode spec: height must be positive");
  if (!(eps_perp >= 1.0) || !std::isfinite(eps_perp) || !(eps_par >= 1.0) ||
      !std::isfinite(eps_par))
    throw std::domain_error("mode spec: permittivities must be finite and >= 1");
  if (shield_radius_m) {
    if (!(*shield_radius_m > radius_m) || !std::isfinite(*shield_radius_m))
      throw std::domain_error("mode spec: shield radius must exceed the crystal radius");
  }
}

double characteristic_value(const ModeSpec& spec, double f_hz) {
  spec.validate();
  if (!(f_hz > 0.0) || !std::isfinite(f_hz))
    throw std::domain_error("characteristic_value: f must be positive");
  const CharTerms t = char_terms(spec, f_hz);
  return std::isfinite(t.scale) && t.scale > 0.0 ? t.value / t.scale : kNaN;
}

double characteristic_value_isotropic(const ModeSpec& spec, double f_hz) {
  spec.validate();
  if (spec.eps_perp != spec.eps_par)
    throw std::domain_error("characteristic_value_isotropic: eps_perp != eps_par");
  if (!(f_hz > 0.0) || !std::isfinite(f_hz))
    throw std::domain_error("characteristic_value_isotropic: f must be positive");
  return isotropic_terms(spec, f_hz);
}

ModeSolution solve_mode(const ModeSpec& spec, const SolveOptions& opts) {
  spec.validate();
  if (!(opts.scan_step_hz > 0.0) || !(opts.rel_tol > 0.0))
    throw std::domain_error("solve_mode: scan step and tolerance must be positive");

  const int m = spec.azimuthal_m;
  const double a = spec.radius_m;
  const double kz = kPi / spec.height_m;

  // Window in f where J_m' < 0 with no radial node: u in (j'_m1, j_m1). The
  // characteristic value falls from positive to -inf across it, so it holds
  // exactly one root of the no-node branch; slab-like and radial-node
  // families live outside.
  const double u_lo = bessel::first_zero_j_prime(m);
  const double u_hi = bessel::first_zero_j(m);
  double f_lo = f_of_u(spec, u_lo) * (1.0 + 1e-9);
  double f_hi = f_of_u(spec, u_hi) * (1.0 - 1e-9);

  // Exterior decay requires kappa^2 > 0, i.e. f below the open limit.
  const double f_open =
      kSpeedOfLight / (2.0 * kPi) * std::sqrt((m / a) * (m / a) + kz * kz);
  if (f_lo >= f_open * (1.0 - 1e-12))
    throw UnconfinedModeError(
        "mode m=" + std::to_string(m) +
        ": exterior is not evanescent anywhere on the no-node branch");
  f_hi = std::min(f_hi, f_open * (1.0 - 1e-12));

  if (opts.f_min_hz) f_lo = std::max(f_lo, *opts.f_min_hz);
  if (opts.f_max_hz) f_hi = std::min(f_hi, *opts.f_max_hz);
  if (!(f_lo < f_hi))
    throw ModeNotFoundError("mode m=" + std::to_string(m) + ": empty scan window");

  const double step = std::min(opts.scan_step_hz, (f_hi - f_lo) / 50.0);

  double root = kNaN;
  double fa = f_lo;
  CharTerms ta = char_terms(spec, fa);
  for (double fb = f_lo + step; fb <= f_hi + 0.5 * step; fb += step) {
    const double fb_clamped = std::min(fb, f_hi);
    const CharTerms tb = char_terms(spec, fb_clamped);
    const bool ok_a = std::isfinite(ta.value);
    const bool ok_b = std::isfinite(tb.value);
    if (ok_a && ok_b && ta.value * tb.value < 0.0) {
      // Bisection: robust against the -inf tail near the window edge.
      double lo = fa, hi = fb_clamped, vlo = ta.value;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double vm = char_terms(spec, mid).value;
        if (!std::isfinite(vm)) break;
        if (vlo * vm <= 0.0) {
          hi = mid;
        } else {
          lo = mid;
          vlo = vm;
        }
        if ((hi - lo) < opts.rel_tol * mid * 1e-3) break;
      }
      root = 0.5 * (lo + hi);
      break;
    }
    fa = fb_clamped;
    ta = tb;
  }
  if (!std::isfinite(root))
    throw ModeNotFoundError("mode m=" + std::to_string(m) +
                            ": no sign change in the scan window");

  ModeSolution sol;
  sol.spec = spec;
  sol.f_res_hz = root;
  sol.k_z = kz;
  const double k0 = 2.0 * kPi * root / kSpeedOfLight;
  sol.k_rho = std::sqrt(spec.eps_par * k0 * k0 - (spec.eps_par / spec.eps_perp) * kz * kz);
  sol.decay = std::sqrt((m / a) * (m / a) + kz * kz - k0 * k0);
  sol.gamma2_in = spec.eps_perp * k0 * k0 - kz * kz;
  sol.gamma2_out = k0 * k0 - kz * kz;

  const double u = sol.k_rho * a;
  const double w = sol.decay * a;
  sol.shield_mix = spec.shield_radius_m ? shield_rho(spec, sol.decay) : 0.0;
  double psi_out = bessel::cyl_k(m, w);
  if (sol.shield_mix != 0.0) psi_out -= sol.shield_mix * bessel::cyl_i(m, w);
  sol.exterior_coeff = bessel::cyl_j(m, u) / psi_out;

  const CharTerms tr = char_terms(spec, root);
  sol.char_residual = std::abs(tr.value) / tr.scale;

  const ConvergedEnergies ce = converge_energies(sol);
  sol.unit_energy_e_j = ce.u.ue_total;
  sol.unit_energy_m_j = ce.u.um_total;
  sol.quad_rel_change = ce.rel_change;
  sol.filling.p_e_par = ce.u.ue_par_crystal / ce.u.ue_total;
  sol.filling.p_e_perp = ce.u.ue_perp_crystal / ce.u.ue_total;
  sol.filling.p_m_perp = ce.u.um_crystal / ce.u.um_total;
  return sol;
}

FieldSample ModeSolution::pattern(double r_m, double z_m) const {
  FieldSample out;
  if (r_m < 0.0 || std::abs(z_m) > 0.5 * spec.height_m) return out;
  const RadialProfile p = radial_profile(*this, r_m);
  const double cz = std::cos(k_z * z_m);
  const double sz = std::sin(k_z * z_m);
  out.e_z = p.e_z * cz;
  out.e_r = p.e_r * sz;
  out.e_phi = p.e_phi * sz;
  out.h_r = p.h_r * cz;
  out.h_phi = p.h_phi * cz;
  return out;
}

FillingFactors filling_factors(const ModeSolution& sol) {
  sol.spec.validate();
  const ConvergedEnergies ce = converge_energies(sol);
  FillingFactors f;
  f.p_e_par = ce.u.ue_par_crystal / ce.u.ue_total;
  f.p_e_perp = ce.u.ue_perp_crystal / ce.u.ue_total;
  f.p_m_perp = ce.u.um_crystal / ce.u.um_total;
  return f;
}

namespace {

// Maximum of a smooth positive profile on [r0, r1]: dense scan + local
// golden-section refinement around the best sample.
template <typename F>
double piece_maximum(F&& f, double r0, double r1) {
  constexpr int kScan = 3001;
  double best = -1.0;
  int ibest = 0;
  for (int i = 0; i < kScan; ++i) {
    const double r = r0 + (r1 - r0) * i / (kScan - 1);
    const double v = f(r);
    if (v > best) {
      best = v;
      ibest = i;
    }
  }
  double lo = r0 + (r1 - r0) * std::max(ibest - 1, 0) / (kScan - 1);
  double hi = r0 + (r1 - r0) * std::min(ibest + 1, kScan - 1) / (kScan - 1);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 120 && (hi - lo) > 1e-14 * std::max(hi, 1.0); ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = f(x1);
    }
  }
  return std::max({best, f1, f2});
}

}  // namespace

FieldAmplitudes field_amplitudes(const ModeSolution& sol, double energy_j) {
  sol.spec.validate();
  if (!(energy_j >= 0.0) || !std::isfinite(energy_j))
    throw std::domain_error("field_amplitudes: energy must be finite and >= 0");
  if (!(sol.unit_energy_e_j > 0.0) || !(sol.unit_energy_m_j > 0.0))
    throw std::domain_error("field_amplitudes: solution lacks unit energies");

  const double lam_e = std::sqrt(0.5 * energy_j / sol.unit_energy_e_j);
  const double lam_h = std::sqrt(0.5 * energy_j / sol.unit_energy_m_j);

  const auto e_mag = [&](double r) {
    const RadialProfile p = radial_profile(sol, r);
    return std::max(std::abs(p.e_z), std::hypot(p.e_r, p.e_phi));
  };
  const auto h_mag = [&](double r) {
    const RadialProfile p = radial_profile(sol, r);
    return std::hypot(p.h_r, p.h_phi);
  };

  const double a = sol.spec.radius_m;
  const double r_out = exterior_extent(sol);
  // Piecewise: the profiles are smooth inside and outside but jump at the
  // rim (e_r and h through the permittivity step).
  const double e_max = std::max(piece_maximum(e_mag, 0.0, a),
                                piece_maximum(e_mag, std::nextafter(a, r_out), r_out));
  const double h_max = std::max(piece_maximum(h_mag, 0.0, a),
                                piece_maximum(h_mag, std::nextafter(a, r_out), r_out));
  return {lam_e * e_max, lam_h * h_max};
}

}  // namespace wgm::modes
