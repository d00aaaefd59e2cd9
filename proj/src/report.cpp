#include "wgmkit/report.hpp"

namespace wgm::io {

namespace {

Json fano_params_json(const lineshape::FanoParams& p) {
  Json j = Json::object();
  j.set("f0_hz", Json::number(p.f0_hz));
  j.set("gamma_hz", Json::number(p.gamma_hz));
  j.set("q_asym", Json::number(p.q_asym));
  j.set("amp", Json::number(p.amp));
  j.set("baseline", Json::number(p.baseline));
  return j;
}

}  // namespace

Json fit_report(const lineshape::FitResult& fit, const lineshape::FrequencyTrace& trace) {
  Json j = Json::object();
  j.set("params", fano_params_json(fit.params));

  Json errs = Json::object();
  errs.set("f0_hz", Json::number(fit.std_errors[0]));
  errs.set("gamma_hz", Json::number(fit.std_errors[1]));
  errs.set("q_asym", Json::number(fit.std_errors[2]));
  errs.set("amp", Json::number(fit.std_errors[3]));
  errs.set("baseline", Json::number(fit.std_errors[4]));
  j.set("std_errors", std::move(errs));

  Json cov = Json::array();
  for (int r = 0; r < lineshape::kNumFanoParams; ++r) {
    Json row = Json::array();
    for (int c = 0; c < lineshape::kNumFanoParams; ++c)
      row.push(Json::number(fit.covariance[r][c]));
    cov.push(std::move(row));
  }
  j.set("covariance", std::move(cov));

  j.set("q_loaded", Json::number(fit.q_loaded));
  j.set("q_loaded_sigma", Json::number(fit.q_loaded_sigma));
  j.set("residual_rms", Json::number(fit.residual_rms));
  j.set("snr", Json::number(fit.snr));
  j.set("converged", Json::boolean(fit.converged));
  j.set("iterations", Json::number(fit.iterations));
  j.set("n_points", Json::number(static_cast<double>(trace.size())));

  Json meta = Json::object();
  meta.set("source", trace.meta.source.empty() ? Json::null() : Json::string(trace.meta.source));
  meta.set("source_dbm",
           trace.meta.source_dbm ? Json::number(*trace.meta.source_dbm) : Json::null());
  meta.set("temperature_mk",
           trace.meta.temperature_mk ? Json::number(*trace.meta.temperature_mk) : Json::null());
  meta.set("mode", trace.meta.mode_label.empty() ? Json::null()
                                                 : Json::string(trace.meta.mode_label));
  j.set("trace", std::move(meta));
  return j;
}

Json mode_report(const modes::ModeSolution& sol, const modes::FieldAmplitudes* unit_fields) {
  Json j = Json::object();
  Json spec = Json::object();
  spec.set("m", Json::number(sol.spec.azimuthal_m));
  spec.set("radius_m", Json::number(sol.spec.radius_m));
  spec.set("height_m", Json::number(sol.spec.height_m));
  spec.set("eps_perp", Json::number(sol.spec.eps_perp));
  spec.set("eps_par", Json::number(sol.spec.eps_par));
  spec.set("shield_radius_m",
           sol.spec.shield_radius_m ? Json::number(*sol.spec.shield_radius_m) : Json::null());
  j.set("spec", std::move(spec));

  j.set("f_res_hz", Json::number(sol.f_res_hz));
  j.set("k_z", Json::number(sol.k_z));
  j.set("k_rho", Json::number(sol.k_rho));
  j.set("decay", Json::number(sol.decay));
  j.set("char_residual", Json::number(sol.char_residual));
  j.set("quad_rel_change", Json::number(sol.quad_rel_change));

  Json fill = Json::object();
  fill.set("p_e_perp", Json::number(sol.filling.p_e_perp));
  fill.set("p_e_par", Json::number(sol.filling.p_e_par));
  fill.set("p_e_total", Json::number(sol.filling.p_e_perp + sol.filling.p_e_par));
  fill.set("p_m_perp", Json::number(sol.filling.p_m_perp));
  j.set("filling", std::move(fill));

  if (unit_fields) {
    Json f = Json::object();
    f.set("energy_j", Json::number(1.0));
    f.set("e_peak", Json::number(unit_fields->e_peak));
    f.set("h_peak", Json::number(unit_fields->h_peak));
    j.set("unit_fields", std::move(f));
  }
  return j;
}

Json sweep_report(const material::SweepReport& rep, const material::MaterialSummary& summary,
                  const material::SaturationFit* saturation) {
  Json j = Json::object();
  Json rows = Json::array();
  for (const auto& r : rep.rows) {
    Json row = Json::object();
    row.set("p_source_dbm", Json::number(r.p_source_dbm));
    row.set("p_res_dbm", Json::number(r.p_res_dbm));
    row.set("f0_hz", Json::number(r.f0_hz));
    row.set("f0_sigma_hz", Json::number(r.f0_sigma_hz));
    row.set("q", Json::number(r.q_loaded));
    row.set("q_sigma", Json::number(r.q_sigma));
    row.set("snr", Json::number(r.snr));
    row.set("converged", Json::boolean(r.converged));
    row.set("frac_shift", Json::number(r.frac_shift));
    row.set("chi_prime", Json::number(r.chi_prime));
    row.set("tan_delta", Json::number(r.tan_delta));
    row.set("energy_j", Json::number(r.energy_j));
    row.set("n_photon", Json::number(r.n_photon));
    row.set("e_peak", Json::number(r.e_peak));
    row.set("h_peak", Json::number(r.h_peak));
    row.set("source_file",
            r.source_file.empty() ? Json::null() : Json::string(r.source_file));
    rows.push(std::move(row));
  }
  j.set("rows", std::move(rows));
  j.set("reference_index", Json::number(static_cast<double>(rep.reference_index)));
  j.set("f0_ref_hz", Json::number(rep.f0_ref_hz));

  Json sm = Json::object();
  sm.set("chi_prime_low_power", Json::number(summary.chi_prime_low_power));
  sm.set("delta_chi_double_prime", Json::number(summary.delta_chi_double_prime));
  sm.set("tan_delta_bound", Json::number(summary.tan_delta_bound));
  sm.set("q0_low_power", Json::number(summary.q0_low_power));
  j.set("summary", std::move(sm));

  if (saturation) {
    Json st = Json::object();
    st.set("x_unsat", Json::number(saturation->params.x_unsat));
    st.set("x_sat", Json::number(saturation->params.x_sat));
    st.set("p_c_w", Json::number(saturation->params.p_c_w));
    st.set("x_unsat_sigma", Json::number(saturation->x_unsat_sigma));
    st.set("x_sat_sigma", Json::number(saturation->x_sat_sigma));
    st.set("p_c_sigma_w", Json::number(saturation->p_c_sigma_w));
    st.set("residual_rms", Json::number(saturation->residual_rms));
    st.set("converged", Json::boolean(saturation->converged));
    j.set("saturation", std::move(st));
  } else {
    j.set("saturation", Json::null());
  }
  return j;
}

std::string sweep_rows_csv(const material::SweepReport& rep) {
  std::string out =
      "p_source_dbm,p_res_dbm,q,q_sigma,f0_hz,f0_sigma_hz,frac_shift,chi_prime,tan_delta,"
      "e_peak,h_peak,n_photon\n";
  for (const auto& r : rep.rows) {
    out += format_double(r.p_source_dbm) + ',' + format_double(r.p_res_dbm) + ',' +
           format_double(r.q_loaded) + ',' + format_double(r.q_sigma) + ',' +
           format_double(r.f0_hz) + ',' + format_double(r.f0_sigma_hz) + ',' +
           format_double(r.frac_shift) + ',' + format_double(r.chi_prime) + ',' +
           format_double(r.tan_delta) + ',' + format_double(r.e_peak) + ',' +
           format_double(r.h_peak) + ',' + format_double(r.n_photon) + '\n';
  }
  return out;
}

}  // namespace wgm::io
