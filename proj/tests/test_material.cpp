#include <doctest.h>

#include <cmath>
#include <vector>

#include "wgmkit/constants.hpp"
#include "wgmkit/errors.hpp"
#include "wgmkit/material.hpp"
#include "wgmkit/rng.hpp"

using namespace wgm;
using namespace wgm::material;

namespace {

chain::PowerChain light_chain() {
  chain::PowerChain c;
  c.stages = {{"attenuator", -30.0}, {"cables", -7.0}};
  c.beta1 = 0.02;
  c.beta2 = 0.0;
  return c;
}

lineshape::FrequencyTrace make_trace(double f0, double q, double snr, double source_dbm,
                                     std::uint64_t seed) {
  lineshape::FanoParams p;
  p.f0_hz = f0;
  p.gamma_hz = f0 / q;
  p.q_asym = 0.35;
  p.amp = 1.0;
  p.baseline = 0.15;
  lineshape::FrequencyTrace t = lineshape::synth_trace(p, 401, 30.0 * p.gamma_hz, snr, seed);
  t.meta.source_dbm = source_dbm;
  return t;
}

}  // namespace

TEST_CASE("susceptibility from the frequency pull is exact") {
  CHECK(chi_prime(0.002, 1e-12) == 1e-9);  // bitwise: 2/0.002 * 1e-12
  CHECK(chi_prime(1.0, 0.0) == 0.0);
  CHECK(chi_prime(0.5, -2e-9) == doctest::Approx(-8e-9).epsilon(1e-15));
  CHECK_THROWS_AS(chi_prime(0.0, 1e-9), std::domain_error);
  CHECK_THROWS_AS(chi_prime(1.5, 1e-9), std::domain_error);
}

TEST_CASE("loss tangent bound and unloaded Q") {
  CHECK(loss_tangent(5e8, 1.0) == 2e-9);
  CHECK(loss_tangent(5e7, 1.0) == 2e-8);
  CHECK(loss_tangent(5e8, 0.5) == doctest::Approx(4e-9).epsilon(1e-15));
  CHECK(q_unloaded(2e8, 0.02, 0.0) == doctest::Approx(2.04e8).epsilon(1e-15));
  CHECK(q_unloaded(2e8, 0.0, 0.0) == 2e8);
  CHECK_THROWS_AS(loss_tangent(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(q_unloaded(2e8, -0.1, 0.0), std::domain_error);
}

TEST_CASE("power-dependent dissipation difference") {
  CHECK(delta_chi_double_prime(0.002, 2e-8, 2e-9) ==
        doctest::Approx((2e-8 - 2e-9) / 0.002).epsilon(1e-15));
  CHECK(delta_chi_double_prime(1.0, 1e-8, 1e-8) == 0.0);
}

TEST_CASE("saturation curve evaluation") {
  SaturationParams p;
  p.x_unsat = 6e-9;
  p.x_sat = 1e-9;
  p.p_c_w = 1e-9;
  CHECK(p.eval(0.0) == doctest::Approx(6e-9).epsilon(1e-15));
  CHECK(p.eval(1e3) == doctest::Approx(1e-9).epsilon(1e-6));
  // Exactly halfway at the critical power.
  CHECK(p.eval(1e-9) == doctest::Approx(3.5e-9).epsilon(1e-15));
  CHECK_THROWS_AS(p.eval(-1.0), std::domain_error);
  p.p_c_w = 0.0;
  CHECK_THROWS_AS(p.validate(), std::domain_error);
}

TEST_CASE("saturation fit recovers noiseless parameters") {
  SaturationParams truth;
  truth.x_unsat = 6e-9;
  truth.x_sat = 1e-9;
  truth.p_c_w = 1e-9;
  std::vector<double> pw, x;
  for (int i = 0; i <= 20; ++i) {
    const double p = 1e-12 * std::pow(10.0, 6.0 * i / 20.0);  // 1e-12 .. 1e-6 W
    pw.push_back(p);
    x.push_back(truth.eval(p));
  }
  const SaturationFit fit = fit_saturation(pw, x);
  REQUIRE(fit.converged);
  CHECK(std::abs(fit.params.x_unsat - truth.x_unsat) < 1e-6 * truth.x_unsat);
  CHECK(std::abs(fit.params.x_sat - truth.x_sat) < 1e-6 * truth.x_unsat);
  CHECK(std::abs(fit.params.p_c_w - truth.p_c_w) < 1e-6 * truth.p_c_w);
}

TEST_CASE("saturation fit tolerates multiplicative noise") {
  SaturationParams truth;
  truth.x_unsat = 5e-9;
  truth.x_sat = 1e-9;
  truth.p_c_w = 1e-12;
  NormalSampler noise(31);
  std::vector<double> pw, x;
  for (int i = 0; i < 16; ++i) {
    const double p = 1e-14 * std::pow(10.0, 7.5 * i / 15.0);
    pw.push_back(p);
    x.push_back(truth.eval(p) * (1.0 + 0.05 * noise()));
  }
  const SaturationFit fit = fit_saturation(pw, x);
  REQUIRE(fit.converged);
  CHECK(std::abs(fit.params.x_unsat - truth.x_unsat) < 0.2 * truth.x_unsat);
  CHECK(std::abs(fit.params.x_sat - truth.x_sat) < 0.2 * truth.x_unsat);
  CHECK(fit.params.p_c_w > truth.p_c_w / 2.0);
  CHECK(fit.params.p_c_w < truth.p_c_w * 2.0);
  CHECK(fit.x_unsat_sigma > 0.0);
}

TEST_CASE("saturation fit rejects unidentifiable data") {
  std::vector<double> pw = {1e-12, 1e-11, 1e-10, 1e-9, 1e-8};

  SUBCASE("flat data") {
    std::vector<double> x(pw.size(), 3e-9);
    CHECK_THROWS_AS(fit_saturation(pw, x), SaturationFitError);
  }
  SUBCASE("curve that never bends inside the span") {
    std::vector<double> x;
    for (double p : pw) x.push_back(1e-9 * (1.0 + 1e-4 * p / pw.back()));
    CHECK_THROWS_AS(fit_saturation(pw, x), SaturationFitError);
  }
}

TEST_CASE("saturation fit input validation") {
  std::vector<double> pw = {1e-12, 1e-11, 1e-10, 1e-9};
  std::vector<double> x = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(fit_saturation(pw, x), std::invalid_argument);
  x = {1.0, 2.0, 3.0, 4.0};
  std::vector<double> bad_p = {0.0, 1e-11, 1e-10, 1e-9};
  CHECK_THROWS_AS(fit_saturation(bad_p, x), std::domain_error);
  std::vector<double> same_p(4, 1e-10);
  CHECK_THROWS_AS(fit_saturation(same_p, x), std::domain_error);
  CHECK_THROWS_AS(fit_saturation({1e-12, 1e-11}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("power sweep analysis derives consistent rows") {
  const chain::PowerChain c = light_chain();
  ModeContext mode;
  mode.p_e_total = 0.9927;
  mode.p_m_perp = 0.954;
  mode.e_peak_unit = 4.9e7;
  mode.h_peak_unit = 4.0e5;

  // Five powers with injected shifts and a fixed Q.
  const double f_base = 13.869e9;
  const double q_true = 2.5e8;
  const std::vector<double> sources = {0.0, -10.0, -20.0, -30.0, -40.0};
  const std::vector<double> shifts = {0.0, 1e-9, 2.5e-9, 4e-9, 4.8e-9};
  std::vector<lineshape::FrequencyTrace> traces;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const double f0 = f_base * (1.0 + shifts[i]);
    traces.push_back(make_trace(f0, q_true, 2000.0, sources[i], 40 + i));
  }

  const SweepReport rep = analyze_power_sweep(traces, c, mode);
  REQUIRE(rep.rows.size() == 5);
  // Ascending power and the top row as reference.
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    CHECK(rep.rows[i].p_source_dbm > rep.rows[i - 1].p_source_dbm);
  CHECK(rep.reference_index == 4);
  CHECK(rep.rows[4].frac_shift == 0.0);
  CHECK(rep.rows[4].chi_prime == 0.0);

  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const SweepRow& row = rep.rows[i];
    REQUIRE(row.converged);
    // Source order reversed: row i corresponds to sources[4-i].
    const double want_shift = shifts[4 - i] - shifts[0];
    CHECK(std::abs(row.frac_shift - want_shift) < 2e-10);
    CHECK(std::abs(row.chi_prime - 2.0 / 0.954 * want_shift) < 5e-10);
    CHECK(std::abs(row.q_loaded - q_true) / q_true < 0.02);
    // Loss bound from this row's own Q.
    const double q0 = row.q_loaded * 1.02;
    CHECK(row.tan_delta == doctest::Approx(1.0 / (q0 * 0.9927)).epsilon(1e-12));
    // Photon number consistent with the stored energy.
    CHECK(row.n_photon ==
          doctest::Approx(row.energy_j / (kPlanck * row.f0_hz)).epsilon(1e-12));
    // Fields scale as sqrt(energy).
    CHECK(row.e_peak == doctest::Approx(4.9e7 * std::sqrt(row.energy_j)).epsilon(1e-12));
    CHECK(row.h_peak == doctest::Approx(4.0e5 * std::sqrt(row.energy_j)).epsilon(1e-12));
    // Chain applied to the source power.
    CHECK(row.p_res_dbm ==
          doctest::Approx(chain::chain_apply(row.p_source_dbm, c)).epsilon(1e-12));
  }

  // Energy rises monotonically with power at constant Q.
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    CHECK(rep.rows[i].energy_j > rep.rows[i - 1].energy_j);

  const MaterialSummary s = summarize(rep, c, mode);
  CHECK(s.chi_prime_low_power == doctest::Approx(rep.rows[0].chi_prime));
  CHECK(s.q0_low_power == doctest::Approx(rep.rows[0].q_loaded * 1.02));
  CHECK(s.tan_delta_bound == doctest::Approx(rep.rows[0].tan_delta));
}

TEST_CASE("a dead trace yields a NaN row without poisoning the sweep") {
  const chain::PowerChain c = light_chain();
  ModeContext mode;
  mode.p_e_total = 0.99;
  mode.p_m_perp = 0.95;

  std::vector<lineshape::FrequencyTrace> traces;
  traces.push_back(make_trace(13.869e9, 2e8, 500.0, 0.0, 7));
  traces.push_back(make_trace(13.869e9, 2e8, 500.0, -10.0, 8));
  // Featureless noise at the lowest power.
  std::vector<double> freq, mag;
  NormalSampler noise(9);
  for (int i = 0; i < 200; ++i) {
    freq.push_back(13.869e9 - 500.0 + 5.0 * i);
    mag.push_back(1.0 + 0.05 * noise());
  }
  lineshape::FrequencyTrace dead = lineshape::FrequencyTrace::from_magnitude(freq, mag);
  dead.meta.source_dbm = -90.0;
  traces.push_back(std::move(dead));

  const SweepReport rep = analyze_power_sweep(traces, c, mode);
  REQUIRE(rep.rows.size() == 3);
  CHECK_FALSE(rep.rows[0].converged);
  CHECK(std::isnan(rep.rows[0].q_loaded));
  CHECK(std::isnan(rep.rows[0].chi_prime));
  CHECK(std::isnan(rep.rows[0].e_peak));
  CHECK(rep.rows[1].converged);
  CHECK(rep.rows[2].converged);
  CHECK(rep.reference_index == 2);

  // Summary skips the dead row.
  const MaterialSummary s = summarize(rep, c, mode);
  CHECK(s.q0_low_power == doctest::Approx(rep.rows[1].q_loaded * 1.02));
}

TEST_CASE("sweep analysis validation") {
  const chain::PowerChain c = light_chain();
  ModeContext mode;
  CHECK_THROWS_AS(analyze_power_sweep({}, c, mode), std::invalid_argument);

  // Trace without source power metadata.
  lineshape::FrequencyTrace t = make_trace(10e9, 1e8, 100.0, 0.0, 1);
  t.meta.source_dbm.reset();
  CHECK_THROWS_AS(analyze_power_sweep({t}, c, mode), std::invalid_argument);

  ModeContext bad = mode;
  bad.p_m_perp = 0.0;
  CHECK_THROWS_AS(analyze_power_sweep({make_trace(10e9, 1e8, 100.0, 0.0, 1)}, c, bad),
                  std::domain_error);
}
