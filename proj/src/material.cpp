#include "wgmkit/material.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "wgmkit/errors.hpp"
#include "wgmkit/levmar.hpp"

namespace wgm::material {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_filling(double p, const char* name) {
  if (!(p > 0.0) || !(p <= 1.0) || !std::isfinite(p))
    throw std::domain_error(std::string("material: ") + name + " must lie in (0, 1]");
}

}  // namespace

double chi_prime(double p_m_perp, double frac_shift) {
  check_filling(p_m_perp, "p_m_perp");
  if (!std::isfinite(frac_shift)) throw std::domain_error("material: non-finite shift");
  return 2.0 / p_m_perp * frac_shift;
}

double delta_chi_double_prime(double p_m_perp, double inv_q_low, double inv_q_high) {
  check_filling(p_m_perp, "p_m_perp");
  if (!std::isfinite(inv_q_low) || !std::isfinite(inv_q_high))
    throw std::domain_error("material: non-finite 1/Q");
  return (inv_q_low - inv_q_high) / p_m_perp;
}

double loss_tangent(double q_unloaded, double p_e_total) {
  check_filling(p_e_total, "p_e_total");
  if (!(q_unloaded > 0.0) || !std::isfinite(q_unloaded))
    throw std::domain_error("material: unloaded Q must be positive");
  return 1.0 / (q_unloaded * p_e_total);
}

double q_unloaded(double q_loaded, double beta1, double beta2) {
  if (!(q_loaded > 0.0) || !std::isfinite(q_loaded))
    throw std::domain_error("material: loaded Q must be positive");
  if (!(beta1 >= 0.0) || !(beta2 >= 0.0) || !std::isfinite(beta1) || !std::isfinite(beta2))
    throw std::domain_error("material: couplings must be finite and >= 0");
  return q_loaded * (1.0 + beta1 + beta2);
}

double SaturationParams::eval(double p_w) const {
  validate();
  if (!(p_w >= 0.0) || !std::isfinite(p_w))
    throw std::domain_error("saturation: power must be finite and >= 0");
  return x_sat + (x_unsat - x_sat) / (1.0 + p_w / p_c_w);
}

void SaturationParams::validate() const {
  if (!std::isfinite(x_unsat) || !std::isfinite(x_sat))
    throw std::domain_error("saturation: non-finite asymptote");
  if (!(p_c_w > 0.0) || !std::isfinite(p_c_w))
    throw std::domain_error("saturation: critical power must be positive");
}

SaturationFit fit_saturation(const std::vector<double>& power_w, const std::vector<double>& x,
                             std::optional<SaturationParams> guess) {
  if (power_w.size() != x.size())
    throw std::invalid_argument("saturation fit: size mismatch");
  if (power_w.size() < 4)
    throw std::invalid_argument("saturation fit: need at least 4 points");
  for (double p : power_w)
    if (!(p > 0.0) || !std::isfinite(p))
      throw std::domain_error("saturation fit: powers must be positive and finite");
  for (double v : x)
    if (!std::isfinite(v)) throw std::domain_error("saturation fit: non-finite data");

  const auto [pmin_it, pmax_it] = std::minmax_element(power_w.begin(), power_w.end());
  const double p_min = *pmin_it, p_max = *pmax_it;
  if (!(p_max > p_min)) throw std::domain_error("saturation fit: all powers equal");

  SaturationParams g;
  if (guess) {
    g = *guess;
    g.validate();
  } else {
    g.x_unsat = x[static_cast<std::size_t>(pmin_it - power_w.begin())];
    g.x_sat = x[static_cast<std::size_t>(pmax_it - power_w.begin())];
    g.p_c_w = std::sqrt(p_min * p_max);
  }

  double x_scale = 0.0;
  for (double v : x) x_scale = std::max(x_scale, std::abs(v));
  if (x_scale <= 0.0) x_scale = 1.0;

  const double ln_lo = std::log(p_min) - 46.0;
  const double ln_hi = std::log(p_max) + 46.0;

  Eigen::VectorXd c0(3);
  c0 << g.x_unsat / x_scale, g.x_sat / x_scale,
      std::clamp(std::log(g.p_c_w), ln_lo, ln_hi);

  const auto residual = [&](const Eigen::VectorXd& c, Eigen::VectorXd& r) {
    r.resize(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double sat = c[1] + (c[0] - c[1]) / (1.0 + power_w[i] * std::exp(-c[2]));
      r[static_cast<Eigen::Index>(i)] = sat - x[i] / x_scale;
    }
  };
  const auto feasible = [&](const Eigen::VectorXd& c) { return c[2] > ln_lo && c[2] < ln_hi; };

  lm::Result lsq;
  try {
    lsq = lm::solve(residual, c0, {}, feasible);
  } catch (const DegenerateFitError& e) {
    throw SaturationFitError(std::string("saturation fit: ") + e.what());
  }
  if (!lsq.converged) throw SaturationFitError("saturation fit: did not converge");

  SaturationFit out;
  out.params.x_unsat = x_scale * lsq.params[0];
  out.params.x_sat = x_scale * lsq.params[1];
  out.params.p_c_w = std::exp(lsq.params[2]);
  out.converged = true;
  out.iterations = lsq.iterations;
  out.residual_rms = x_scale * lsq.residual_rms;
  out.x_unsat_sigma = x_scale * std::sqrt(std::max(lsq.covariance(0, 0), 0.0));
  out.x_sat_sigma = x_scale * std::sqrt(std::max(lsq.covariance(1, 1), 0.0));
  out.p_c_sigma_w = out.params.p_c_w * std::sqrt(std::max(lsq.covariance(2, 2), 0.0));

  // A critical power orders of magnitude outside the sampled span means the
  // curve never bends inside the data: the parameters are not identified.
  if (out.params.p_c_w < p_min * 1e-3 || out.params.p_c_w > p_max * 1e3)
    throw SaturationFitError("saturation fit: critical power far outside the sampled range");
  return out;
}

SweepReport analyze_power_sweep(const std::vector<lineshape::FrequencyTrace>& traces,
                                const chain::PowerChain& chain, const ModeContext& mode) {
  chain.validate();
  check_filling(mode.p_e_total, "p_e_total");
  check_filling(mode.p_m_perp, "p_m_perp");
  if (traces.empty()) throw std::invalid_argument("sweep: no traces");
  for (std::size_t i = 0; i < traces.size(); ++i)
    if (!traces[i].meta.source_dbm)
      throw std::invalid_argument("sweep: trace " + std::to_string(i) +
                                  " lacks source power metadata");

  // Fit from the strongest trace downward so each fit seeds the next; the
  // low-power tail is where the estimator alone would struggle.
  std::vector<std::size_t> order(traces.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
    const double pl = *traces[lhs].meta.source_dbm, pr = *traces[rhs].meta.source_dbm;
    if (pl != pr) return pl > pr;
    if (traces[lhs].meta.source != traces[rhs].meta.source)
      return traces[lhs].meta.source < traces[rhs].meta.source;
    return lhs < rhs;
  });

  struct Partial {
    lineshape::FitResult fit;
    bool ok = false;
  };
  std::vector<Partial> fits(traces.size());
  std::optional<lineshape::FanoParams> seed;
  // A seeded fit can "converge" onto pure noise, so a fit only counts when
  // the line it found is plausible: centred inside the trace, narrower than
  // the span, and significant against the residual noise.
  const auto plausible = [](const lineshape::FitResult& fr,
                            const lineshape::FrequencyTrace& tr) {
    const double f_lo = tr.freq_hz.front(), f_hi = tr.freq_hz.back();
    return fr.params.f0_hz >= f_lo && fr.params.f0_hz <= f_hi &&
           fr.params.gamma_hz <= (f_hi - f_lo) && fr.snr >= 5.0;
  };
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& tr = traces[order[k]];
    try {
      lineshape::FitResult fr = lineshape::fit_fano(tr, seed);
      if (fr.converged && plausible(fr, tr)) {
        seed = fr.params;
        fits[order[k]].ok = true;
      }
      fits[order[k]].fit = fr;
    } catch (const NoResonanceError&) {
    } catch (const DegenerateFitError&) {
    } catch (const std::domain_error&) {
    }
  }

  // Reference: the highest-power converged fit.
  std::optional<std::size_t> ref;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (fits[order[k]].ok) {
      ref = order[k];
      break;
    }
  }
  if (!ref) throw NoResonanceError("sweep: no trace produced a converged fit");
  const double f0_ref = fits[*ref].fit.params.f0_hz;

  SweepReport report;
  report.f0_ref_hz = f0_ref;
  report.rows.reserve(traces.size());
  for (std::size_t k = order.size(); k-- > 0;) {  // ascending power
    const std::size_t i = order[k];
    const auto& tr = traces[i];
    SweepRow row;
    row.p_source_dbm = *tr.meta.source_dbm;
    row.p_res_dbm = chain.beta1 > 0.0 ? chain::chain_apply(row.p_source_dbm, chain) : kNaN;
    row.source_file = tr.meta.source;
    if (fits[i].ok) {
      const auto& fit = fits[i].fit;
      row.converged = true;
      row.f0_hz = fit.params.f0_hz;
      row.f0_sigma_hz = fit.std_errors[0];
      row.q_loaded = fit.q_loaded;
      row.q_sigma = fit.q_loaded_sigma;
      row.snr = fit.snr;
      row.frac_shift = (fit.params.f0_hz - f0_ref) / f0_ref;
      row.chi_prime = chi_prime(mode.p_m_perp, row.frac_shift);
      row.tan_delta =
          loss_tangent(q_unloaded(fit.q_loaded, chain.beta1, chain.beta2), mode.p_e_total);
      // Intracavity quantities take the stage-only power; the coupling
      // mismatch is inside intracavity_state, not applied twice.
      const double p_stage_w =
          chain::dbm_to_watts(row.p_source_dbm + chain.stage_gain_db());
      const chain::IntracavityState st =
          chain::intracavity_state(p_stage_w, chain, fit.q_loaded, fit.params.f0_hz);
      row.energy_j = st.energy_j;
      row.n_photon = st.photon_number;
      if (mode.e_peak_unit > 0.0) row.e_peak = mode.e_peak_unit * std::sqrt(st.energy_j);
      if (mode.h_peak_unit > 0.0) row.h_peak = mode.h_peak_unit * std::sqrt(st.energy_j);
    } else {
      row.f0_hz = row.f0_sigma_hz = row.q_loaded = row.q_sigma = kNaN;
      row.snr = row.frac_shift = row.chi_prime = row.tan_delta = kNaN;
      row.energy_j = row.n_photon = row.e_peak = row.h_peak = kNaN;
    }
    if (i == *ref) report.reference_index = report.rows.size();
    report.rows.push_back(std::move(row));
  }
  return report;
}

MaterialSummary summarize(const SweepReport& report, const chain::PowerChain& chain,
                          const ModeContext& mode) {
  chain.validate();
  check_filling(mode.p_e_total, "p_e_total");
  check_filling(mode.p_m_perp, "p_m_perp");

  const SweepRow* low = nullptr;
  const SweepRow* high = nullptr;
  for (const auto& row : report.rows) {
    if (!row.converged) continue;
    if (!low) low = &row;  // rows are ascending in power
    high = &row;
  }
  if (!low || !high) throw std::invalid_argument("summary: no converged rows");

  MaterialSummary s;
  s.chi_prime_low_power = low->chi_prime;
  s.tan_delta_bound = low->tan_delta;
  s.q0_low_power = q_unloaded(low->q_loaded, chain.beta1, chain.beta2);
  const double q0_high = q_unloaded(high->q_loaded, chain.beta1, chain.beta2);
  s.delta_chi_double_prime =
      delta_chi_double_prime(mode.p_m_perp, 1.0 / s.q0_low_power, 1.0 / q0_high);
  return s;
}

}  // namespace wgm::material
