// Python bindings for the core operations: lineshape fitting, power-chain
// budgeting, mode solving and material analysis.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wgmkit/config.hpp"
#include "wgmkit/errors.hpp"
#include "wgmkit/lineshape.hpp"
#include "wgmkit/material.hpp"
#include "wgmkit/mode_solver.hpp"
#include "wgmkit/power_chain.hpp"
#include "wgmkit/report.hpp"
#include "wgmkit/trace_io.hpp"

namespace py = pybind11;
using namespace wgm;

PYBIND11_MODULE(_core, m) {
  m.doc() = "whispering-gallery resonator measurement toolkit";

  py::register_exception<NoResonanceError>(m, "NoResonanceError");
  py::register_exception<DegenerateFitError>(m, "DegenerateFitError");
  py::register_exception<ModeNotFoundError>(m, "ModeNotFoundError");
  py::register_exception<UnconfinedModeError>(m, "UnconfinedModeError");
  py::register_exception<SaturationFitError>(m, "SaturationFitError");
  py::register_exception<QuadratureError>(m, "QuadratureError");
  py::register_exception<ConfigError>(m, "ConfigError");

  // lineshape
  py::class_<lineshape::TraceMeta>(m, "TraceMeta")
      .def(py::init<>())
      .def_readwrite("source_dbm", &lineshape::TraceMeta::source_dbm)
      .def_readwrite("temperature_mk", &lineshape::TraceMeta::temperature_mk)
      .def_readwrite("mode_label", &lineshape::TraceMeta::mode_label)
      .def_readwrite("source", &lineshape::TraceMeta::source);

  py::class_<lineshape::FrequencyTrace>(m, "FrequencyTrace")
      .def(py::init<std::vector<double>, std::vector<std::complex<double>>,
                    lineshape::TraceMeta>(),
           py::arg("freq_hz"), py::arg("s21"), py::arg("meta") = lineshape::TraceMeta{})
      .def_static("from_magnitude", &lineshape::FrequencyTrace::from_magnitude,
                  py::arg("freq_hz"), py::arg("magnitude"),
                  py::arg("meta") = lineshape::TraceMeta{})
      .def_readonly("freq_hz", &lineshape::FrequencyTrace::freq_hz)
      .def_readonly("s21", &lineshape::FrequencyTrace::s21)
      .def_readonly("magnitude_mode", &lineshape::FrequencyTrace::magnitude_mode)
      .def_readwrite("meta", &lineshape::FrequencyTrace::meta)
      .def("__len__", &lineshape::FrequencyTrace::size)
      .def("response", &lineshape::FrequencyTrace::response, py::arg("i"));

  py::class_<lineshape::FanoParams>(m, "FanoParams")
      .def(py::init<>())
      .def(py::init([](double f0, double gamma, double q, double amp, double baseline) {
             lineshape::FanoParams p;
             p.f0_hz = f0;
             p.gamma_hz = gamma;
             p.q_asym = q;
             p.amp = amp;
             p.baseline = baseline;
             return p;
           }),
           py::arg("f0_hz"), py::arg("gamma_hz"), py::arg("q_asym"), py::arg("amp"),
           py::arg("baseline"))
      .def_readwrite("f0_hz", &lineshape::FanoParams::f0_hz)
      .def_readwrite("gamma_hz", &lineshape::FanoParams::gamma_hz)
      .def_readwrite("q_asym", &lineshape::FanoParams::q_asym)
      .def_readwrite("amp", &lineshape::FanoParams::amp)
      .def_readwrite("baseline", &lineshape::FanoParams::baseline)
      .def("q_loaded", &lineshape::FanoParams::q_loaded)
      .def("validate", &lineshape::FanoParams::validate);

  py::class_<lineshape::FitResult>(m, "FitResult")
      .def_readonly("params", &lineshape::FitResult::params)
      .def_readonly("std_errors", &lineshape::FitResult::std_errors)
      .def_readonly("covariance", &lineshape::FitResult::covariance)
      .def_readonly("residual_rms", &lineshape::FitResult::residual_rms)
      .def_readonly("snr", &lineshape::FitResult::snr)
      .def_readonly("converged", &lineshape::FitResult::converged)
      .def_readonly("iterations", &lineshape::FitResult::iterations)
      .def_readonly("q_loaded", &lineshape::FitResult::q_loaded)
      .def_readonly("q_loaded_sigma", &lineshape::FitResult::q_loaded_sigma);

  m.def("fano_eval", &lineshape::fano_eval, py::arg("params"), py::arg("f_hz"));
  m.def("estimate_initial", &lineshape::estimate_initial, py::arg("trace"));
  m.def("fit_fano", &lineshape::fit_fano, py::arg("trace"),
        py::arg("guess") = std::nullopt);
  m.def("synth_trace", &lineshape::synth_trace, py::arg("params"), py::arg("n_points"),
        py::arg("span_hz"), py::arg("snr"), py::arg("seed"));
  m.def("snr_estimate", &lineshape::snr_estimate, py::arg("trace"), py::arg("fit"));

  // power chain
  py::class_<chain::ChainStage>(m, "ChainStage")
      .def(py::init([](std::string name, double gain_db) {
             chain::ChainStage s;
             s.name = std::move(name);
             s.gain_db = gain_db;
             return s;
           }),
           py::arg("name"), py::arg("gain_db"))
      .def_readwrite("name", &chain::ChainStage::name)
      .def_readwrite("gain_db", &chain::ChainStage::gain_db);

  py::class_<chain::PowerChain>(m, "PowerChain")
      .def(py::init([](std::vector<chain::ChainStage> stages, double beta1, double beta2) {
             chain::PowerChain c;
             c.stages = std::move(stages);
             c.beta1 = beta1;
             c.beta2 = beta2;
             return c;
           }),
           py::arg("stages"), py::arg("beta1"), py::arg("beta2") = 0.0)
      .def_readwrite("stages", &chain::PowerChain::stages)
      .def_readwrite("beta1", &chain::PowerChain::beta1)
      .def_readwrite("beta2", &chain::PowerChain::beta2)
      .def("validate", &chain::PowerChain::validate)
      .def("stage_gain_db", &chain::PowerChain::stage_gain_db);

  py::class_<chain::IntracavityState>(m, "IntracavityState")
      .def_readonly("p_abs_w", &chain::IntracavityState::p_abs_w)
      .def_readonly("energy_j", &chain::IntracavityState::energy_j)
      .def_readonly("photon_energy_j", &chain::IntracavityState::photon_energy_j)
      .def_readonly("photon_number", &chain::IntracavityState::photon_number);

  m.def("dbm_to_watts", &chain::dbm_to_watts, py::arg("dbm"));
  m.def("watts_to_dbm", &chain::watts_to_dbm, py::arg("watts"));
  m.def("coupling_loss_db", &chain::coupling_loss_db, py::arg("beta"));
  m.def("chain_apply", &chain::chain_apply, py::arg("source_dbm"), py::arg("chain"));
  m.def("intracavity_state", &chain::intracavity_state, py::arg("p_inc_w"),
        py::arg("chain"), py::arg("q_loaded"), py::arg("f0_hz"));

  // mode solver
  py::class_<modes::ModeSpec>(m, "ModeSpec")
      .def(py::init([](int m_idx, double radius, double height, double eps_perp,
                       double eps_par, std::optional<double> shield) {
             modes::ModeSpec s;
             s.azimuthal_m = m_idx;
             s.radius_m = radius;
             s.height_m = height;
             s.eps_perp = eps_perp;
             s.eps_par = eps_par;
             s.shield_radius_m = shield;
             return s;
           }),
           py::arg("azimuthal_m"), py::arg("radius_m"), py::arg("height_m"),
           py::arg("eps_perp") = 9.27, py::arg("eps_par") = 11.35,
           py::arg("shield_radius_m") = std::nullopt)
      .def_readwrite("azimuthal_m", &modes::ModeSpec::azimuthal_m)
      .def_readwrite("radius_m", &modes::ModeSpec::radius_m)
      .def_readwrite("height_m", &modes::ModeSpec::height_m)
      .def_readwrite("eps_perp", &modes::ModeSpec::eps_perp)
      .def_readwrite("eps_par", &modes::ModeSpec::eps_par)
      .def_readwrite("shield_radius_m", &modes::ModeSpec::shield_radius_m)
      .def("validate", &modes::ModeSpec::validate);

  py::class_<modes::FieldSample>(m, "FieldSample")
      .def_readonly("e_r", &modes::FieldSample::e_r)
      .def_readonly("e_phi", &modes::FieldSample::e_phi)
      .def_readonly("e_z", &modes::FieldSample::e_z)
      .def_readonly("h_r", &modes::FieldSample::h_r)
      .def_readonly("h_phi", &modes::FieldSample::h_phi);

  py::class_<modes::FillingFactors>(m, "FillingFactors")
      .def_readonly("p_e_perp", &modes::FillingFactors::p_e_perp)
      .def_readonly("p_e_par", &modes::FillingFactors::p_e_par)
      .def_readonly("p_m_perp", &modes::FillingFactors::p_m_perp);

  py::class_<modes::ModeSolution>(m, "ModeSolution")
      .def_readonly("spec", &modes::ModeSolution::spec)
      .def_readonly("f_res_hz", &modes::ModeSolution::f_res_hz)
      .def_readonly("k_z", &modes::ModeSolution::k_z)
      .def_readonly("k_rho", &modes::ModeSolution::k_rho)
      .def_readonly("decay", &modes::ModeSolution::decay)
      .def_readonly("filling", &modes::ModeSolution::filling)
      .def_readonly("char_residual", &modes::ModeSolution::char_residual)
      .def_readonly("unit_energy_e_j", &modes::ModeSolution::unit_energy_e_j)
      .def_readonly("unit_energy_m_j", &modes::ModeSolution::unit_energy_m_j)
      .def("pattern", &modes::ModeSolution::pattern, py::arg("r_m"), py::arg("z_m"));

  py::class_<modes::SolveOptions>(m, "SolveOptions")
      .def(py::init<>())
      .def_readwrite("scan_step_hz", &modes::SolveOptions::scan_step_hz)
      .def_readwrite("rel_tol", &modes::SolveOptions::rel_tol)
      .def_readwrite("f_min_hz", &modes::SolveOptions::f_min_hz)
      .def_readwrite("f_max_hz", &modes::SolveOptions::f_max_hz);

  py::class_<modes::FieldAmplitudes>(m, "FieldAmplitudes")
      .def_readonly("e_peak", &modes::FieldAmplitudes::e_peak)
      .def_readonly("h_peak", &modes::FieldAmplitudes::h_peak);

  m.def("solve_mode", &modes::solve_mode, py::arg("spec"),
        py::arg("options") = modes::SolveOptions{});
  m.def("filling_factors", &modes::filling_factors, py::arg("solution"));
  m.def("field_amplitudes", &modes::field_amplitudes, py::arg("solution"),
        py::arg("energy_j"));
  m.def("characteristic_value", &modes::characteristic_value, py::arg("spec"),
        py::arg("f_hz"));

  // material
  py::class_<material::SaturationParams>(m, "SaturationParams")
      .def(py::init([](double x_unsat, double x_sat, double p_c_w) {
             material::SaturationParams p;
             p.x_unsat = x_unsat;
             p.x_sat = x_sat;
             p.p_c_w = p_c_w;
             return p;
           }),
           py::arg("x_unsat"), py::arg("x_sat"), py::arg("p_c_w"))
      .def_readwrite("x_unsat", &material::SaturationParams::x_unsat)
      .def_readwrite("x_sat", &material::SaturationParams::x_sat)
      .def_readwrite("p_c_w", &material::SaturationParams::p_c_w)
      .def("eval", &material::SaturationParams::eval, py::arg("p_w"));

  py::class_<material::SaturationFit>(m, "SaturationFit")
      .def_readonly("params", &material::SaturationFit::params)
      .def_readonly("x_unsat_sigma", &material::SaturationFit::x_unsat_sigma)
      .def_readonly("x_sat_sigma", &material::SaturationFit::x_sat_sigma)
      .def_readonly("p_c_sigma_w", &material::SaturationFit::p_c_sigma_w)
      .def_readonly("residual_rms", &material::SaturationFit::residual_rms)
      .def_readonly("converged", &material::SaturationFit::converged);

  py::class_<material::SweepRow>(m, "SweepRow")
      .def_readonly("p_source_dbm", &material::SweepRow::p_source_dbm)
      .def_readonly("p_res_dbm", &material::SweepRow::p_res_dbm)
      .def_readonly("f0_hz", &material::SweepRow::f0_hz)
      .def_readonly("f0_sigma_hz", &material::SweepRow::f0_sigma_hz)
      .def_readonly("q_loaded", &material::SweepRow::q_loaded)
      .def_readonly("q_sigma", &material::SweepRow::q_sigma)
      .def_readonly("snr", &material::SweepRow::snr)
      .def_readonly("converged", &material::SweepRow::converged)
      .def_readonly("frac_shift", &material::SweepRow::frac_shift)
      .def_readonly("chi_prime", &material::SweepRow::chi_prime)
      .def_readonly("tan_delta", &material::SweepRow::tan_delta)
      .def_readonly("energy_j", &material::SweepRow::energy_j)
      .def_readonly("n_photon", &material::SweepRow::n_photon)
      .def_readonly("e_peak", &material::SweepRow::e_peak)
      .def_readonly("h_peak", &material::SweepRow::h_peak)
      .def_readonly("source_file", &material::SweepRow::source_file);

  py::class_<material::SweepReport>(m, "SweepReport")
      .def_readonly("rows", &material::SweepReport::rows)
      .def_readonly("reference_index", &material::SweepReport::reference_index)
      .def_readonly("f0_ref_hz", &material::SweepReport::f0_ref_hz);

  py::class_<material::ModeContext>(m, "ModeContext")
      .def(py::init<>())
      .def_readwrite("p_e_total", &material::ModeContext::p_e_total)
      .def_readwrite("p_m_perp", &material::ModeContext::p_m_perp)
      .def_readwrite("e_peak_unit", &material::ModeContext::e_peak_unit)
      .def_readwrite("h_peak_unit", &material::ModeContext::h_peak_unit);

  py::class_<material::MaterialSummary>(m, "MaterialSummary")
      .def_readonly("chi_prime_low_power", &material::MaterialSummary::chi_prime_low_power)
      .def_readonly("delta_chi_double_prime",
                    &material::MaterialSummary::delta_chi_double_prime)
      .def_readonly("tan_delta_bound", &material::MaterialSummary::tan_delta_bound)
      .def_readonly("q0_low_power", &material::MaterialSummary::q0_low_power);

  m.def("chi_prime", &material::chi_prime, py::arg("p_m_perp"), py::arg("frac_shift"));
  m.def("delta_chi_double_prime", &material::delta_chi_double_prime, py::arg("p_m_perp"),
        py::arg("inv_q_low"), py::arg("inv_q_high"));
  m.def("loss_tangent", &material::loss_tangent, py::arg("q_unloaded"),
        py::arg("p_e_total"));
  m.def("q_unloaded", &material::q_unloaded, py::arg("q_loaded"), py::arg("beta1"),
        py::arg("beta2"));
  m.def("fit_saturation", &material::fit_saturation, py::arg("power_w"), py::arg("x"),
        py::arg("guess") = std::nullopt);
  m.def("analyze_power_sweep", &material::analyze_power_sweep, py::arg("traces"),
        py::arg("chain"), py::arg("mode"));
  m.def("summarize", &material::summarize, py::arg("report"), py::arg("chain"),
        py::arg("mode"));

  // io
  m.def("read_trace_csv", &io::read_trace_csv, py::arg("path"));
  m.def("write_trace_csv", &io::write_trace_csv, py::arg("path"), py::arg("trace"));
  m.def("trace_to_csv", &io::trace_to_csv, py::arg("trace"));
  m.def("load_chain_json", &io::load_chain_json, py::arg("path"));
  m.def("load_mode_spec_json", &io::load_mode_spec_json, py::arg("path"));
}
