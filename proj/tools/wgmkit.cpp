// wgmkit: fit resonance traces, budget the power chain, solve mode geometry
// and run whole power sweeps from the command line.
//
// Exit codes: 0 success, 2 bad usage or invalid input files/values, 1 when a
// computation fails on well-formed input (no resonance, no mode root, ...).
// Set WGMKIT_LOG=info (or debug) for progress lines on stderr.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <glob.h>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wgmkit/config.hpp"
#include "wgmkit/errors.hpp"
#include "wgmkit/json_writer.hpp"
#include "wgmkit/lineshape.hpp"
#include "wgmkit/material.hpp"
#include "wgmkit/mode_solver.hpp"
#include "wgmkit/power_chain.hpp"
#include "wgmkit/report.hpp"
#include "wgmkit/trace_io.hpp"

namespace {

bool log_enabled() {
  const char* v = std::getenv("WGMKIT_LOG");
  if (!v) return false;
  const std::string s(v);
  return !s.empty() && s != "0" && s != "off" && s != "quiet";
}

void log_info(const std::string& msg) {
  if (log_enabled()) std::cerr << "wgmkit: " << msg << "\n";
}

void require_file(const std::string& path) {
  if (!std::filesystem::exists(path))
    throw wgm::ConfigError("missing input file: " + path);
}

double parse_snr(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF" || text == "infinite")
    return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw std::invalid_argument("synth: --snr must be a number or 'inf'");
  return v;
}

wgm::lineshape::FanoParams parse_guess(const std::string& text) {
  nlohmann::json j;
  if (std::filesystem::exists(text)) {
    std::ifstream f(text);
    try {
      j = nlohmann::json::parse(f);
    } catch (const nlohmann::json::parse_error& e) {
      throw wgm::ConfigError(text + ": " + e.what());
    }
  } else {
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
      throw std::invalid_argument(
          "--guess must be inline JSON or a JSON file path; keys f0_hz, gamma_hz, "
          "q_asym, amp, baseline");
    }
  }
  const auto need = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number())
      throw std::invalid_argument(std::string("--guess: missing numeric key '") + key + "'");
    return j[key].get<double>();
  };
  wgm::lineshape::FanoParams p;
  p.f0_hz = need("f0_hz");
  p.gamma_hz = need("gamma_hz");
  p.q_asym = need("q_asym");
  p.amp = need("amp");
  p.baseline = need("baseline");
  return p;
}

std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t g{};
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  std::vector<std::string> out;
  if (rc == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  globfree(&g);
  if (rc != 0 && rc != GLOB_NOMATCH)
    throw std::runtime_error("glob failed for pattern: " + pattern);
  if (out.empty())
    throw wgm::ConfigError("no files match --inputs pattern: " + pattern);
  std::sort(out.begin(), out.end());
  return out;
}

struct FitArgs {
  std::string input, out, guess;
};

int run_fit(const FitArgs& a) {
  require_file(a.input);
  const wgm::lineshape::FrequencyTrace trace = wgm::io::read_trace_csv(a.input);
  log_info("fit: " + std::to_string(trace.size()) + " points from " + a.input);
  std::optional<wgm::lineshape::FanoParams> guess;
  if (!a.guess.empty()) guess = parse_guess(a.guess);
  const wgm::lineshape::FitResult fit = wgm::lineshape::fit_fano(trace, guess);
  log_info("fit: converged=" + std::string(fit.converged ? "true" : "false") +
           " Q=" + wgm::io::format_double(fit.q_loaded));
  wgm::io::write_file_atomic(a.out, wgm::io::fit_report(fit, trace).dump());
  return 0;
}

struct SynthArgs {
  double f0 = 0.0, q = 0.0, asym = 0.0, amp = 0.0, baseline = 0.0, span = 0.0;
  int points = 0;
  std::string snr = "inf";
  std::uint64_t seed = 0;
  std::string out;
  // optional metadata embedded as trace comments
  std::optional<double> source_dbm, temperature_mk;
  std::string mode_label;
};

int run_synth(const SynthArgs& a) {
  if (!(a.q > 0.0)) throw std::domain_error("synth: --q must be positive");
  wgm::lineshape::FanoParams p;
  p.f0_hz = a.f0;
  p.gamma_hz = a.f0 / a.q;
  p.q_asym = a.asym;
  p.amp = a.amp;
  p.baseline = a.baseline;
  wgm::lineshape::FrequencyTrace trace =
      wgm::lineshape::synth_trace(p, a.points, a.span, parse_snr(a.snr), a.seed);
  trace.meta.source_dbm = a.source_dbm;
  trace.meta.temperature_mk = a.temperature_mk;
  trace.meta.mode_label = a.mode_label;
  wgm::io::write_trace_csv(a.out, trace);
  log_info("synth: wrote " + std::to_string(trace.size()) + " points to " + a.out);
  return 0;
}

int run_chain(const std::string& config, double source_dbm) {
  require_file(config);
  const wgm::chain::PowerChain chain = wgm::io::load_chain_json(config);
  const double out = wgm::chain::chain_apply(source_dbm, chain);
  std::cout << "p_res_dbm = " << wgm::io::format_double(out) << "\n";
  return 0;
}

int run_mode(const std::string& config, const std::string& out) {
  require_file(config);
  const wgm::modes::ModeSpec spec = wgm::io::load_mode_spec_json(config);
  const wgm::modes::ModeSolution sol = wgm::modes::solve_mode(spec);
  log_info("mode: f_res = " + wgm::io::format_double(sol.f_res_hz) + " Hz");
  const wgm::modes::FieldAmplitudes unit = wgm::modes::field_amplitudes(sol, 1.0);
  wgm::io::write_file_atomic(out, wgm::io::mode_report(sol, &unit).dump());
  return 0;
}

struct SweepArgs {
  std::string inputs, chain, mode, out;
};

int run_sweep(const SweepArgs& a) {
  require_file(a.chain);
  require_file(a.mode);
  const wgm::chain::PowerChain chain = wgm::io::load_chain_json(a.chain);
  const wgm::modes::ModeSpec spec = wgm::io::load_mode_spec_json(a.mode);

  const std::vector<std::string> paths = expand_glob(a.inputs);
  std::vector<wgm::lineshape::FrequencyTrace> traces;
  traces.reserve(paths.size());
  for (const auto& p : paths) traces.push_back(wgm::io::read_trace_csv(p));
  log_info("sweep: " + std::to_string(traces.size()) + " traces");

  const wgm::modes::ModeSolution sol = wgm::modes::solve_mode(spec);
  const wgm::modes::FieldAmplitudes unit = wgm::modes::field_amplitudes(sol, 1.0);
  wgm::material::ModeContext mode;
  mode.p_e_total = sol.filling.p_e_par + sol.filling.p_e_perp;
  mode.p_m_perp = sol.filling.p_m_perp;
  mode.e_peak_unit = unit.e_peak;
  mode.h_peak_unit = unit.h_peak;

  const wgm::material::SweepReport rep =
      wgm::material::analyze_power_sweep(traces, chain, mode);
  const wgm::material::MaterialSummary summary =
      wgm::material::summarize(rep, chain, mode);

  // Saturation fit of chi' vs resonator power over the converged rows;
  // referenced to the highest-power row, so the asymptotes are offsets.
  std::optional<wgm::material::SaturationFit> saturation;
  {
    std::vector<double> pw, chi;
    for (const auto& row : rep.rows) {
      if (!row.converged) continue;
      pw.push_back(wgm::chain::dbm_to_watts(row.p_res_dbm));
      chi.push_back(row.chi_prime);
    }
    if (pw.size() >= 4) {
      try {
        saturation = wgm::material::fit_saturation(pw, chi);
      } catch (const wgm::SaturationFitError& e) {
        log_info(std::string("sweep: saturation fit skipped: ") + e.what());
      }
    }
  }

  const wgm::io::Json report =
      wgm::io::sweep_report(rep, summary, saturation ? &*saturation : nullptr);

  const std::filesystem::path outp(a.out);
  const std::string stem = (outp.parent_path() / outp.stem()).string();
  wgm::io::write_file_atomic(a.out, report.dump());
  wgm::io::write_file_atomic(stem + "_rows.csv", wgm::io::sweep_rows_csv(rep));

  std::string q_csv = "p_res_dbm,q,q_sigma\n";
  std::string shift_csv = "p_res_dbm,frac_shift,chi_prime\n";
  std::string tand_csv = "e_peak,h_peak,tan_delta\n";
  for (const auto& row : rep.rows) {
    q_csv += wgm::io::format_double(row.p_res_dbm) + ',' +
             wgm::io::format_double(row.q_loaded) + ',' +
             wgm::io::format_double(row.q_sigma) + '\n';
    shift_csv += wgm::io::format_double(row.p_res_dbm) + ',' +
                 wgm::io::format_double(row.frac_shift) + ',' +
                 wgm::io::format_double(row.chi_prime) + '\n';
    tand_csv += wgm::io::format_double(row.e_peak) + ',' +
                wgm::io::format_double(row.h_peak) + ',' +
                wgm::io::format_double(row.tan_delta) + '\n';
  }
  wgm::io::write_file_atomic(stem + "_q_vs_power.csv", q_csv);
  wgm::io::write_file_atomic(stem + "_shift_vs_power.csv", shift_csv);
  wgm::io::write_file_atomic(stem + "_tand_vs_field.csv", tand_csv);
  log_info("sweep: wrote " + a.out + " and plot CSVs");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"whispering-gallery resonator measurement toolkit"};
  app.require_subcommand(1);

  FitArgs fit_args;
  CLI::App* fit = app.add_subcommand("fit", "fit a Fano lineshape to a trace CSV");
  fit->add_option("--input", fit_args.input, "trace CSV")->required();
  fit->add_option("--guess", fit_args.guess, "initial parameters, inline JSON or file");
  fit->add_option("--out", fit_args.out, "JSON report path")->required();

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic trace CSV");
  synth->add_option("--f0", synth_args.f0, "resonance frequency, Hz")->required();
  synth->add_option("--q", synth_args.q, "loaded Q (gamma = f0/Q)")->required();
  synth->add_option("--asym", synth_args.asym, "Fano asymmetry q")->required();
  synth->add_option("--amp", synth_args.amp, "amplitude A")->required();
  synth->add_option("--baseline", synth_args.baseline, "baseline B")->required();
  synth->add_option("--points", synth_args.points, "number of samples")->required();
  synth->add_option("--span", synth_args.span, "frequency span, Hz")->required();
  synth->add_option("--snr", synth_args.snr, "amplitude/noise ratio or 'inf'")->required();
  synth->add_option("--seed", synth_args.seed, "noise seed")->required();
  synth->add_option("--out", synth_args.out, "output trace CSV")->required();
  double meta_source = 0.0, meta_temp = 0.0;
  CLI::Option* opt_source =
      synth->add_option("--source-dbm", meta_source, "source power metadata, dBm");
  CLI::Option* opt_temp =
      synth->add_option("--temperature-mk", meta_temp, "temperature metadata, mK");
  synth->add_option("--mode-label", synth_args.mode_label, "mode label metadata");

  std::string chain_config;
  double chain_source = 0.0;
  CLI::App* chain = app.add_subcommand("chain", "propagate source power to the resonator");
  chain->add_option("--config", chain_config, "chain JSON")->required();
  chain->add_option("--source-dbm", chain_source, "source power, dBm")->required();

  std::string mode_config, mode_out;
  CLI::App* mode = app.add_subcommand("mode", "solve the quasi-TM mode for a geometry");
  mode->add_option("--config", mode_config, "mode spec JSON")->required();
  mode->add_option("--out", mode_out, "JSON report path")->required();

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "analyze a power sweep of trace CSVs");
  sweep->add_option("--inputs", sweep_args.inputs, "glob pattern of trace CSVs")->required();
  sweep->add_option("--chain", sweep_args.chain, "chain JSON")->required();
  sweep->add_option("--mode", sweep_args.mode, "mode spec JSON")->required();
  sweep->add_option("--out", sweep_args.out, "JSON report path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*fit) return run_fit(fit_args);
    if (*synth) {
      if (*opt_source) synth_args.source_dbm = meta_source;
      if (*opt_temp) synth_args.temperature_mk = meta_temp;
      return run_synth(synth_args);
    }
    if (*chain) return run_chain(chain_config, chain_source);
    if (*mode) return run_mode(mode_config, mode_out);
    if (*sweep) return run_sweep(sweep_args);
  } catch (const wgm::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;  // unreachable with require_subcommand(1)
}
