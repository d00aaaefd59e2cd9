#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wgm::lineshape {

// Side-channel metadata carried by a trace (power at the source, cryostat
// temperature, operator's mode label, originating file). Optional throughout.
struct TraceMeta {
  std::optional<double> source_dbm;
  std::optional<double> temperature_mk;
  std::string mode_label;  // empty when unset
  std::string source;      // file name for provenance, empty for synthetics
};

// A sampled transmission sweep. `magnitude_mode` marks traces recorded as a
// scalar response (stored in the real part, may be negative for noisy
// synthetics); complex traces are reduced to |s21| when fitted.
struct FrequencyTrace {
  std::vector<double> freq_hz;
  std::vector<std::complex<double>> s21;
  bool magnitude_mode = false;
  TraceMeta meta;

  FrequencyTrace(std::vector<double> freq, std::vector<std::complex<double>> response,
                 TraceMeta m = {});
  static FrequencyTrace from_magnitude(std::vector<double> freq, std::vector<double> magnitude,
                                       TraceMeta m = {});

  std::size_t size() const { return freq_hz.size(); }
  double response(std::size_t i) const {
    return magnitude_mode ? s21[i].real() : std::abs(s21[i]);
  }
  double span_hz() const { return freq_hz.back() - freq_hz.front(); }
};

// F(f) = B + A*(q_asym + eps)^2 / (1 + eps^2), eps = 2*(f - f0)/gamma.
// gamma is the full width, so the loaded Q is f0/gamma.
struct FanoParams {
  double f0_hz = 0.0;
  double gamma_hz = 0.0;
  double q_asym = 0.0;
  double amp = 0.0;
  double baseline = 0.0;

  double q_loaded() const { return f0_hz / gamma_hz; }
  void validate() const;  // throws std::domain_error on violations
};

// Parameter order used by std_errors/covariance: f0, gamma, q_asym, amp, baseline.
inline constexpr int kNumFanoParams = 5;

// Reported SNR ceiling for effectively noiseless data.
inline constexpr double kSnrCap = 1e12;

struct FitResult {
  FanoParams params;
  std::array<double, kNumFanoParams> std_errors{};
  std::array<std::array<double, kNumFanoParams>, kNumFanoParams> covariance{};
  double residual_rms = 0.0;
  double snr = 0.0;
  bool converged = false;
  int iterations = 0;
  double q_loaded = 0.0;
  double q_loaded_sigma = 0.0;  // from the (f0, gamma) covariance block
};

double fano_eval(const FanoParams& p, double f_hz);

// Data-driven starting point. Reliable for SNR of roughly 10 and above;
// throws NoResonanceError when no feature clears the noise floor.
FanoParams estimate_initial(const FrequencyTrace& trace);

// Least-squares fit of the five Fano parameters to the trace response.
// Internally rescaled so that Q up to 1e9 poses no conditioning problem.
FitResult fit_fano(const FrequencyTrace& trace, std::optional<FanoParams> guess = std::nullopt);

// Synthetic trace on a uniform grid centred on f0 with additive Gaussian
// noise of sigma = amp/snr (snr may be infinite). Deterministic in the seed.
FrequencyTrace synth_trace(const FanoParams& params, int n_points, double span_hz, double snr,
                           std::uint64_t seed);

// Amplitude-to-residual SNR of a converged fit against a trace.
double snr_estimate(const FrequencyTrace& trace, const FitResult& fit);

}  // namespace wgm::lineshape
