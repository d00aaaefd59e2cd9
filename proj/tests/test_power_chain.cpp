#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "wgmkit/power_chain.hpp"

using namespace wgm::chain;

namespace {

PowerChain padded_line() {
  PowerChain c;
  c.stages = {{"input_attenuator", -50.0}, {"cryostat_attenuator", -40.0}, {"cables", -7.0}};
  c.beta1 = 0.02;
  c.beta2 = 0.0;
  return c;
}

}  // namespace

TEST_CASE("coupling mismatch loss") {
  CHECK(std::abs(coupling_loss_db(0.02) - 16.9897000433602) < 1e-9);
  CHECK(std::abs(coupling_loss_db(0.02) - 16.99) < 0.01);
  CHECK(coupling_loss_db(1.0) == 0.0);
  CHECK(std::abs(coupling_loss_db(0.1) - 10.0) < 1e-9);
  // Overcoupled ports gain back: negative "loss".
  CHECK(coupling_loss_db(2.0) < 0.0);
  CHECK_THROWS_AS(coupling_loss_db(0.0), std::domain_error);
  CHECK_THROWS_AS(coupling_loss_db(-0.5), std::domain_error);
}

TEST_CASE("dBm/watt conversions invert each other") {
  CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(watts_to_dbm(1e-3) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  for (double dbm : {-140.0, -60.0, -17.3, 0.0, 12.5}) {
    CHECK(watts_to_dbm(dbm_to_watts(dbm)) == doctest::Approx(dbm).epsilon(1e-12));
  }
}

TEST_CASE("chain budget for a heavily padded line") {
  const PowerChain c = padded_line();
  CHECK(c.stage_gain_db() == doctest::Approx(-97.0).epsilon(1e-15));
  // 97 dB of stages plus 16.99 dB of coupling mismatch.
  CHECK(std::abs(chain_apply(0.0, c) - (-113.9897000433602)) < 1e-9);
  // Cables plus the coupling port form a 23.99 dB block.
  CHECK(std::abs(-(-7.0) + coupling_loss_db(0.02) - 23.99) < 0.01);

  // dB bookkeeping must agree with multiplying linear power factors.
  const double lin = 1e-3 * std::pow(10.0, -50.0 / 10.0) * std::pow(10.0, -40.0 / 10.0) *
                     std::pow(10.0, -7.0 / 10.0) * 0.02;
  CHECK(dbm_to_watts(chain_apply(0.0, c)) == doctest::Approx(lin).epsilon(1e-12));
}

TEST_CASE("empty chain with matched coupling is the identity") {
  PowerChain c;
  c.beta1 = 1.0;
  CHECK(chain_apply(-12.34, c) == -12.34);
}

TEST_CASE("chain validation") {
  PowerChain c;
  c.beta1 = -0.1;
  CHECK_THROWS_AS(c.validate(), std::domain_error);
  c.beta1 = 0.02;
  c.beta2 = -1.0;
  CHECK_THROWS_AS(c.validate(), std::domain_error);
  c.beta2 = 0.0;
  c.stages = {{"nan_stage", std::nan("")}};
  CHECK_THROWS_AS(c.validate(), std::domain_error);
}

TEST_CASE("intracavity stored energy and photon number") {
  PowerChain c;
  c.beta1 = 0.02;
  c.beta2 = 0.0;
  const double p_inc = 1e-17;  // W at the probe
  const double q = 2e8;
  const double f0 = 13.869e9;
  const IntracavityState st = intracavity_state(p_inc, c, q, f0);

  // Independent arithmetic for every derived quantity.
  const double absorbed = 4.0 * 0.02 / (1.02 * 1.02);
  CHECK(st.p_abs_w == doctest::Approx(p_inc * absorbed).epsilon(1e-14));
  const double energy = q * p_inc * absorbed / (2.0 * std::numbers::pi * f0);
  CHECK(st.energy_j == doctest::Approx(energy).epsilon(1e-14));
  const double photon = 6.62607015e-34 * f0;
  CHECK(st.photon_energy_j == doctest::Approx(photon).epsilon(1e-14));
  CHECK(st.photon_number == doctest::Approx(energy / photon).epsilon(1e-14));
  CHECK(st.photon_number == doctest::Approx(192.0).epsilon(0.01));
}

TEST_CASE("absorbed power never exceeds incident power") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> beta(0.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    PowerChain c;
    c.beta1 = beta(rng) + 1e-6;
    c.beta2 = beta(rng);
    const IntracavityState st = intracavity_state(1e-12, c, 1e8, 10e9);
    CHECK(st.p_abs_w <= 1e-12 * (1.0 + 1e-12));
    CHECK(st.p_abs_w >= 0.0);
  }
  // Critically coupled single port absorbs everything.
  PowerChain crit;
  crit.beta1 = 1.0;
  CHECK(intracavity_state(1e-12, crit, 1e8, 10e9).p_abs_w ==
        doctest::Approx(1e-12).epsilon(1e-14));
}

TEST_CASE("intracavity input validation") {
  PowerChain c;
  c.beta1 = 0.02;
  CHECK_THROWS_AS(intracavity_state(-1e-12, c, 1e8, 10e9), std::domain_error);
  CHECK_THROWS_AS(intracavity_state(1e-12, c, -1e8, 10e9), std::domain_error);
  CHECK_THROWS_AS(intracavity_state(1e-12, c, 1e8, 0.0), std::domain_error);
}
