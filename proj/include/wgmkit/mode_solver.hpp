#pragma once

#include <optional>

namespace wgm::modes {

// Uniaxial dielectric cylinder, crystal axis along z. Quasi-TM (WGH-type)
// modes with azimuthal index m, no axial or radial nodes inside the crystal.
struct ModeSpec {
  int azimuthal_m = 1;
  double radius_m = 0.0;
  double height_m = 0.0;
  double eps_perp = 9.27;  // transverse to the crystal axis
  double eps_par = 11.35;  // along the crystal axis
  std::optional<double> shield_radius_m;  // conducting wall, must exceed radius_m

  void validate() const;  // throws std::domain_error
};

// Field components at one point, common arbitrary scale. These are the
// amplitudes of each quadrature; relative time phases between components are
// dropped (only moduli enter energies). Quasi-TM: h_z is identically zero.
struct FieldSample {
  double e_r = 0.0;
  double e_phi = 0.0;
  double e_z = 0.0;
  double h_r = 0.0;
  double h_phi = 0.0;
};

struct FillingFactors {
  double p_e_perp = 0.0;  // electric energy fraction in the crystal, transverse
  double p_e_par = 0.0;   // electric energy fraction in the crystal, axial
  double p_m_perp = 0.0;  // magnetic energy fraction in the crystal
};

struct ModeSolution {
  ModeSpec spec;
  double f_res_hz = 0.0;
  double k_z = 0.0;        // axial wavenumber (pi/height), rad/m
  double k_rho = 0.0;      // interior radial wavenumber, rad/m
  double decay = 0.0;      // exterior radial decay constant, rad/m
  double gamma2_in = 0.0;  // eps_perp*k0^2 - k_z^2
  double gamma2_out = 0.0; // k0^2 - k_z^2
  double exterior_coeff = 0.0;  // exterior amplitude for a unit interior J_m
  double shield_mix = 0.0;      // I_m admixture enforcing E_z = 0 at the wall

  FillingFactors filling;
  double char_residual = 0.0;    // normalized characteristic-equation residual
  double quad_rel_change = 0.0;  // filling-factor change at the last doubling

  // Energy stored in each field of the unscaled pattern (J); field_amplitudes
  // uses these to put half the requested energy into each field.
  double unit_energy_e_j = 0.0;
  double unit_energy_m_j = 0.0;

  // Unscaled mode pattern at radius r, height z measured from mid-plane.
  // Zero outside the axial extent and beyond the shield.
  FieldSample pattern(double r_m, double z_m) const;
};

struct SolveOptions {
  double scan_step_hz = 1e6;
  double rel_tol = 1e-10;            // root refinement, relative in f
  std::optional<double> f_min_hz;    // optional window override
  std::optional<double> f_max_hz;
};

// Find the fundamental (no radial nodes) quasi-TM resonance for the spec.
// Throws UnconfinedModeError when the exterior cannot decay anywhere in the
// search window and ModeNotFoundError when no root is bracketed.
ModeSolution solve_mode(const ModeSpec& spec, const SolveOptions& opts = {});

// Energy filling factors by adaptive tensor-product Gauss-Legendre
// quadrature, doubling until stable; also recomputed by solve_mode.
FillingFactors filling_factors(const ModeSolution& sol);

struct FieldAmplitudes {
  double e_peak = 0.0;  // V/m
  double h_peak = 0.0;  // A/m
};

// Peak field amplitudes when the mode stores energy_j joules, half in E and
// half in H. Scaling pattern() by e_peak/max|E_pattern| (and likewise for H)
// reproduces a field whose integrated energy is energy_j.
FieldAmplitudes field_amplitudes(const ModeSolution& sol, double energy_j);

// Normalized characteristic-equation value at a trial frequency (NaN where
// the equation is not defined, e.g. non-evanescent exterior).
double characteristic_value(const ModeSpec& spec, double f_hz);

// Same matching written out for an isotropic dielectric (eps_perp == eps_par);
// kept as an independent cross-check of the anisotropic path.
double characteristic_value_isotropic(const ModeSpec& spec, double f_hz);

}  // namespace wgm::modes
