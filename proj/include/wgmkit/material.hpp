#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wgmkit/lineshape.hpp"
#include "wgmkit/power_chain.hpp"

namespace wgm::material {

// Real part of the paramagnetic susceptibility from the fractional frequency
// pull of a mode filling the crystal with magnetic factor p_m_perp:
// chi' = (2 / p_m_perp) * (delta_f / f).
double chi_prime(double p_m_perp, double frac_shift);

// Change of the imaginary part between two power levels from the dissipation
// they add: delta_chi'' = (1/Q_low - 1/Q_high) / p_m_perp.
double delta_chi_double_prime(double p_m_perp, double inv_q_low, double inv_q_high);

// Dielectric loss tangent bound from an unloaded Q and the electric filling
// of the crystal: tan(delta) = 1 / (Q0 * p_e_total).
double loss_tangent(double q_unloaded, double p_e_total);

// Unloaded from loaded Q at couplings beta1/beta2.
double q_unloaded(double q_loaded, double beta1, double beta2);

// Two-level saturation of a susceptibility-like quantity against power:
// x(P) = x_sat + (x_unsat - x_sat) / (1 + P / p_c).
struct SaturationParams {
  double x_unsat = 0.0;
  double x_sat = 0.0;
  double p_c_w = 0.0;

  double eval(double p_w) const;
  void validate() const;
};

struct SaturationFit {
  SaturationParams params;
  double x_unsat_sigma = 0.0;
  double x_sat_sigma = 0.0;
  double p_c_sigma_w = 0.0;
  double residual_rms = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Least-squares saturation fit; p_c is fitted as ln(p_c) so the scale can
// move freely across decades. Throws SaturationFitError when the data spans
// too little of the curve to identify the parameters.
SaturationFit fit_saturation(const std::vector<double>& power_w, const std::vector<double>& x,
                             std::optional<SaturationParams> guess = std::nullopt);

// One power step of a sweep analysis.
struct SweepRow {
  double p_source_dbm = 0.0;
  double p_res_dbm = 0.0;  // at the resonator input, full chain applied
  double f0_hz = 0.0;
  double f0_sigma_hz = 0.0;
  double q_loaded = 0.0;
  double q_sigma = 0.0;
  double snr = 0.0;
  bool converged = false;
  double frac_shift = 0.0;   // (f0 - f0_ref) / f0_ref
  double chi_prime = 0.0;    // from frac_shift
  double tan_delta = 0.0;    // loss-tangent bound at this power
  double energy_j = 0.0;
  double n_photon = 0.0;
  double e_peak = 0.0;       // V/m at the stored energy of this row
  double h_peak = 0.0;       // A/m
  std::string source_file;   // provenance, may be empty
};

struct SweepReport {
  std::vector<SweepRow> rows;   // ascending source power
  std::size_t reference_index = 0;  // row supplying f0_ref (highest power)
  double f0_ref_hz = 0.0;
};

// Mode quantities a sweep analysis needs; fill from a ModeSolution plus
// field_amplitudes, or from tabulated values.
struct ModeContext {
  double p_e_total = 1.0;    // electric filling of the crystal
  double p_m_perp = 1.0;     // magnetic filling of the crystal
  double e_peak_unit = 0.0;  // peak fields at 1 J stored energy; 0 disables
  double h_peak_unit = 0.0;
};

// Fit every trace (descending power, fits seeded from the previous one),
// pick the highest-power converged fit as the frequency reference, then
// derive per-row susceptibility, loss and intracavity quantities.
SweepReport analyze_power_sweep(const std::vector<lineshape::FrequencyTrace>& traces,
                                const chain::PowerChain& chain, const ModeContext& mode);

struct MaterialSummary {
  double chi_prime_low_power = 0.0;     // at the lowest converged power
  double delta_chi_double_prime = 0.0;  // lowest vs highest power
  double tan_delta_bound = 0.0;         // at the lowest converged power
  double q0_low_power = 0.0;
};

MaterialSummary summarize(const SweepReport& report, const chain::PowerChain& chain,
                          const ModeContext& mode);

}  // namespace wgm::material
