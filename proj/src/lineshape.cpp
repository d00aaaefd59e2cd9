#include "wgmkit/lineshape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "wgmkit/errors.hpp"
#include "wgmkit/levmar.hpp"
#include "wgmkit/rng.hpp"

namespace wgm::lineshape {

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) throw std::logic_error("median of empty range");
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double hi = v[mid];
  if (v.size() % 2 == 0) {
    const double lo = *std::max_element(v.begin(), v.begin() + mid);
    return 0.5 * (lo + hi);
  }
  return hi;
}

void validate_grid(const std::vector<double>& freq, std::size_t n_response) {
  if (freq.size() != n_response)
    throw std::invalid_argument("trace: frequency and response lengths differ");
  if (freq.size() < 8) throw std::invalid_argument("trace: need at least 8 samples");
  double prev = 0.0;
  for (std::size_t i = 0; i < freq.size(); ++i) {
    const double f = freq[i];
    if (!std::isfinite(f) || f <= 0.0)
      throw std::invalid_argument("trace: frequencies must be finite and positive");
    if (i > 0 && f <= prev)
      throw std::invalid_argument("trace: frequencies must be strictly increasing");
    prev = f;
  }
}

}  // namespace

FrequencyTrace::FrequencyTrace(std::vector<double> freq, std::vector<std::complex<double>> response,
                               TraceMeta m)
    : freq_hz(std::move(freq)), s21(std::move(response)), magnitude_mode(false),
      meta(std::move(m)) {
  validate_grid(freq_hz, s21.size());
  for (const auto& v : s21)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw std::invalid_argument("trace: response must be finite");
}

FrequencyTrace FrequencyTrace::from_magnitude(std::vector<double> freq,
                                              std::vector<double> magnitude, TraceMeta m) {
  validate_grid(freq, magnitude.size());
  std::vector<std::complex<double>> resp(magnitude.size());
  for (std::size_t i = 0; i < magnitude.size(); ++i) {
    if (!std::isfinite(magnitude[i]))
      throw std::invalid_argument("trace: response must be finite");
    resp[i] = {magnitude[i], 0.0};
  }
  FrequencyTrace t(std::move(freq), std::move(resp), std::move(m));
  t.magnitude_mode = true;
  return t;
}

void FanoParams::validate() const {
  if (!std::isfinite(f0_hz) || !std::isfinite(gamma_hz) || !std::isfinite(q_asym) ||
      !std::isfinite(amp) || !std::isfinite(baseline))
    throw std::domain_error("fano: non-finite parameter");
  if (!(f0_hz > 0.0)) throw std::domain_error("fano: f0 must be positive");
  if (!(gamma_hz > 0.0)) throw std::domain_error("fano: gamma must be positive");
  if (amp < 0.0) throw std::domain_error("fano: amp must be non-negative");
}

double fano_eval(const FanoParams& p, double f_hz) {
  p.validate();
  if (!std::isfinite(f_hz)) throw std::domain_error("fano: non-finite frequency");
  const double eps = 2.0 * (f_hz - p.f0_hz) / p.gamma_hz;
  const double t = p.q_asym + eps;
  return p.baseline + p.amp * t * t / (1.0 + eps * eps);
}

FanoParams estimate_initial(const FrequencyTrace& trace) {
  const std::size_t n = trace.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = trace.response(i);

  // Background level from the outer 10% of samples (5% each end).
  const std::size_t edge = std::max<std::size_t>(2, n / 20);
  std::vector<double> outer;
  outer.reserve(2 * edge);
  for (std::size_t i = 0; i < edge; ++i) outer.push_back(y[i]);
  for (std::size_t i = n - edge; i < n; ++i) outer.push_back(y[i]);
  const double y_bg = median_of(outer);

  // Detection and width run on a moving-average copy so single noise spikes
  // cannot masquerade as the resonance; the centre is refined on raw data.
  std::size_t w = n / 64;
  w |= 1;  // odd
  w = std::clamp<std::size_t>(w, 3, 33);
  if (n < 3 * w) w = 3;
  std::vector<double> s(n);
  {
    const std::size_t half = w / 2;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      acc += y[i];
      if (i >= w) acc -= y[i - w];
      if (i + 1 >= w) s[i - half] = acc / static_cast<double>(w);
    }
    for (std::size_t i = 0; i < half; ++i) s[i] = s[half];
    for (std::size_t i = n - half; i < n; ++i) s[i] = s[n - half - 1];
  }

  // Robust noise scale from raw first differences: the line itself is smooth
  // sample to sample while noise decorrelates, so the median |delta| sees the
  // noise floor even when the resonance fills most of the span.
  std::vector<double> diff(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) diff[i] = std::abs(y[i + 1] - y[i]);
  const double sigma = 1.4826 / std::numbers::sqrt2 * median_of(diff);

  std::size_t i_s = 0;
  double dev_s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::abs(s[i] - y_bg);
    if (d > dev_s) {
      dev_s = d;
      i_s = i;
    }
  }
  if (!(dev_s > 4.0 * sigma) || dev_s <= 0.0)
    throw NoResonanceError("no resonance: largest smoothed deviation is " +
                           std::to_string(dev_s) + " against noise scale " +
                           std::to_string(sigma));

  // Half-deviation crossings around the feature give the width.
  std::size_t i_left = i_s;
  while (i_left > 0 && std::abs(s[i_left] - y_bg) > 0.5 * dev_s) --i_left;
  std::size_t i_right = i_s;
  while (i_right + 1 < n && std::abs(s[i_right] - y_bg) > 0.5 * dev_s) ++i_right;

  // Centre: raw extremum inside the smoothed feature (plus one smoothing
  // window of slack). For a noiseless symmetric dip this is the exact
  // minimum sample.
  const std::size_t lo = i_left > w ? i_left - w : 0;
  const std::size_t hi = std::min(i_right + w, n - 1);
  std::size_t i0 = lo;
  double best = -1.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double d = std::abs(y[i] - y_bg);
    if (d > best) {
      best = d;
      i0 = i;
    }
  }
  const double f0 = trace.freq_hz[i0];

  const double df = trace.span_hz() / static_cast<double>(n - 1);
  double width = trace.freq_hz[i_right] - trace.freq_hz[i_left];
  // Remove the broadening added by the moving average.
  const double blur = (static_cast<double>(w) - 1.0) * df;
  width = std::sqrt(std::max(width * width - blur * blur, 4.0 * df * df));

  // Asymmetry seed from the peak/dip split around the background.
  double up = 0.0, down = 0.0;
  std::size_t i_up = i_s, i_down = i_s;
  for (std::size_t i = 0; i < n; ++i) {
    if (s[i] - y_bg > up) {
      up = s[i] - y_bg;
      i_up = i;
    }
    if (y_bg - s[i] > down) {
      down = y_bg - s[i];
      i_down = i;
    }
  }
  double q_mag = 0.0, amp_est = 0.0;
  if (down > std::max(sigma, 0.05 * up)) {
    amp_est = down;
    q_mag = std::sqrt(up / down);
  } else {
    q_mag = 1.0;  // peak with no visible dip: order-one asymmetry
    amp_est = std::max(up, dev_s);
  }
  q_mag = std::min(q_mag, 10.0);
  // Peak sits at eps = 1/q, dip at eps = -q: q > 0 puts the peak on the
  // high-frequency side.
  const double q_sign = trace.freq_hz[i_up] >= trace.freq_hz[i_down] ? 1.0 : -1.0;
  const double q_est = q_mag < 0.02 ? 0.0 : q_sign * q_mag;

  FanoParams guess;
  guess.f0_hz = f0;
  guess.gamma_hz = std::clamp(width / std::sqrt(2.0 * q_est * q_est + 1.0), df,
                              trace.span_hz());
  guess.q_asym = q_est;
  guess.amp = amp_est;
  guess.baseline = y_bg - amp_est;  // off resonance F -> B + A
  return guess;
}

FitResult fit_fano(const FrequencyTrace& trace, std::optional<FanoParams> guess) {
  const FanoParams g = guess ? *guess : estimate_initial(trace);
  g.validate();

  const std::size_t n = trace.size();
  std::vector<double> y(n);
  double y_scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = trace.response(i);
    y_scale = std::max(y_scale, std::abs(y[i]));
  }
  if (y_scale <= 0.0) y_scale = 1.0;

  // Dimensionless internal parameters: frequency offset and width in units
  // of the guessed width, amplitudes in units of the data scale. Without
  // this the finite-difference Jacobian dies at Q ~ 1e8 (a relative step on
  // f0 would be hundreds of linewidths).
  const double f_ref = g.f0_hz;
  const double w_ref = g.gamma_hz;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (trace.freq_hz[i] - f_ref) / w_ref;

  Eigen::VectorXd c0(5);
  c0 << 0.0, 1.0, g.q_asym, g.amp / y_scale, g.baseline / y_scale;

  const auto residual = [&](const Eigen::VectorXd& c, Eigen::VectorXd& r) {
    r.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      const double eps = 2.0 * (x[i] - c[0]) / c[1];
      const double t = c[2] + eps;
      r[static_cast<Eigen::Index>(i)] = c[4] + c[3] * t * t / (1.0 + eps * eps) - y[i] / y_scale;
    }
  };
  // Width stays positive, amplitude non-negative.
  const auto feasible = [](const Eigen::VectorXd& c) { return c[1] > 1e-12 && c[3] >= 0.0; };

  const lm::Result lsq = lm::solve(residual, c0, {}, feasible);

  FitResult out;
  out.params.f0_hz = f_ref + w_ref * lsq.params[0];
  out.params.gamma_hz = w_ref * lsq.params[1];
  out.params.q_asym = lsq.params[2];
  out.params.amp = y_scale * lsq.params[3];
  out.params.baseline = y_scale * lsq.params[4];
  out.converged = lsq.converged;
  out.iterations = lsq.iterations;
  out.residual_rms = y_scale * lsq.residual_rms;

  const double scale[5] = {w_ref, w_ref, 1.0, y_scale, y_scale};
  for (int i = 0; i < kNumFanoParams; ++i) {
    for (int j = 0; j < kNumFanoParams; ++j)
      out.covariance[i][j] = scale[i] * lsq.covariance(i, j) * scale[j];
    out.std_errors[i] = std::sqrt(std::max(out.covariance[i][i], 0.0));
  }

  out.q_loaded = out.params.q_loaded();
  // Delta method on Q = f0/gamma using the (f0, gamma) covariance block.
  const double f0 = out.params.f0_hz, gm = out.params.gamma_hz;
  const double var_q = out.covariance[0][0] / (gm * gm) +
                       out.covariance[1][1] * f0 * f0 / (gm * gm * gm * gm) -
                       2.0 * out.covariance[0][1] * f0 / (gm * gm * gm);
  out.q_loaded_sigma = std::sqrt(std::max(var_q, 0.0));

  out.snr = out.residual_rms > 0.0
                ? std::min(out.params.amp / out.residual_rms, kSnrCap)
                : kSnrCap;
  return out;
}

FrequencyTrace synth_trace(const FanoParams& params, int n_points, double span_hz, double snr,
                           std::uint64_t seed) {
  params.validate();
  if (n_points < 8) throw std::domain_error("synth: need at least 8 points");
  if (!(span_hz > 0.0) || !std::isfinite(span_hz))
    throw std::domain_error("synth: span must be positive and finite");
  if (std::isnan(snr) || snr <= 0.0)
    throw std::domain_error("synth: snr must be positive (may be infinite)");
  const double f_start = params.f0_hz - 0.5 * span_hz;
  if (f_start <= 0.0) throw std::domain_error("synth: grid reaches non-positive frequency");

  std::vector<double> freq(static_cast<std::size_t>(n_points));
  std::vector<double> mag(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i)
    freq[static_cast<std::size_t>(i)] =
        f_start + span_hz * static_cast<double>(i) / static_cast<double>(n_points - 1);
  for (int i = 0; i < n_points; ++i)
    mag[static_cast<std::size_t>(i)] = fano_eval(params, freq[static_cast<std::size_t>(i)]);
  if (std::isfinite(snr)) {
    NormalSampler noise(seed);
    const double sigma = params.amp / snr;
    for (auto& v : mag) v += sigma * noise();
  }
  return FrequencyTrace::from_magnitude(std::move(freq), std::move(mag));
}

double snr_estimate(const FrequencyTrace& trace, const FitResult& fit) {
  if (!fit.converged) throw std::invalid_argument("snr_estimate: fit did not converge");
  const std::size_t n = trace.size();
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = fano_eval(fit.params, trace.freq_hz[i]) - trace.response(i);
    ssr += r * r;
  }
  const double rms = std::sqrt(ssr / static_cast<double>(n));
  return rms > 0.0 ? std::min(fit.params.amp / rms, kSnrCap) : kSnrCap;
}

}  // namespace wgm::lineshape
