#include "wgmkit/power_chain.hpp"

#include <cmath>
#include <stdexcept>

#include "wgmkit/constants.hpp"

namespace wgm::chain {

void PowerChain::validate() const {
  for (const auto& st : stages)
    if (!std::isfinite(st.gain_db))
      throw std::domain_error("chain: stage '" + st.name + "' has a non-finite gain");
  if (!std::isfinite(beta1) || beta1 < 0.0)
    throw std::domain_error("chain: beta1 must be finite and >= 0");
  if (!std::isfinite(beta2) || beta2 < 0.0)
    throw std::domain_error("chain: beta2 must be finite and >= 0");
}

double PowerChain::stage_gain_db() const {
  double total = 0.0;
  for (const auto& st : stages) total += st.gain_db;
  return total;
}

double dbm_to_watts(double dbm) {
  if (!std::isfinite(dbm)) throw std::domain_error("dbm_to_watts: non-finite input");
  return 1e-3 * std::pow(10.0, dbm / 10.0);
}

double watts_to_dbm(double watts) {
  if (!(watts > 0.0) || !std::isfinite(watts))
    throw std::domain_error("watts_to_dbm: power must be positive and finite");
  return 10.0 * std::log10(watts / 1e-3);
}

double coupling_loss_db(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::domain_error("coupling_loss_db: beta must be positive and finite");
  return -10.0 * std::log10(beta);
}

double chain_apply(double source_dbm, const PowerChain& chain) {
  chain.validate();
  if (!std::isfinite(source_dbm)) throw std::domain_error("chain_apply: non-finite source power");
  if (!(chain.beta1 > 0.0))
    throw std::domain_error("chain_apply: beta1 must be positive to couple power in");
  return source_dbm + chain.stage_gain_db() - coupling_loss_db(chain.beta1);
}

IntracavityState intracavity_state(double p_inc_w, const PowerChain& chain, double q_loaded,
                                   double f0_hz) {
  chain.validate();
  if (!(p_inc_w >= 0.0) || !std::isfinite(p_inc_w))
    throw std::domain_error("intracavity_state: incident power must be finite and >= 0");
  if (!(q_loaded > 0.0) || !std::isfinite(q_loaded))
    throw std::domain_error("intracavity_state: loaded Q must be positive");
  if (!(f0_hz > 0.0) || !std::isfinite(f0_hz))
    throw std::domain_error("intracavity_state: f0 must be positive");

  const double b1 = chain.beta1, b2 = chain.beta2;
  const double denom = 1.0 + b1 + b2;
  const double absorbed_fraction = 4.0 * b1 / (denom * denom);

  IntracavityState st;
  st.p_abs_w = p_inc_w * absorbed_fraction;
  st.energy_j = q_loaded * st.p_abs_w / (2.0 * kPi * f0_hz);
  st.photon_energy_j = kPlanck * f0_hz;
  st.photon_number = st.energy_j / st.photon_energy_j;
  return st;
}

}  // namespace wgm::chain
