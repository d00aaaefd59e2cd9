#pragma once

#include <string>
#include <vector>

namespace wgm::chain {

// One attenuator/cable/amplifier in the injection line; losses are negative
// gains.
struct ChainStage {
  std::string name;
  double gain_db = 0.0;
};

// Injection chain ending at the resonator's input probe. beta1/beta2 are the
// input/output coupling coefficients.
struct PowerChain {
  std::vector<ChainStage> stages;
  double beta1 = 0.0;
  double beta2 = 0.0;

  void validate() const;         // throws std::domain_error
  double stage_gain_db() const;  // sum over stages
};

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

// Mismatch loss of a coupling port, -10*log10(beta). beta must be positive.
double coupling_loss_db(double beta);

// Power reaching the resonator: source + stage gains - input coupling loss.
double chain_apply(double source_dbm, const PowerChain& chain);

struct IntracavityState {
  double p_abs_w = 0.0;         // power absorbed in the resonator
  double energy_j = 0.0;        // stored energy U = Q_L * P_abs / omega0
  double photon_energy_j = 0.0; // h * f0
  double photon_number = 0.0;   // energy_j / photon_energy_j
};

// Steady state for incident power p_inc_w at the input probe (after the
// stage gains, before the coupling mismatch: the 4*beta1/(1+beta1+beta2)^2
// absorption factor accounts for the port).
IntracavityState intracavity_state(double p_inc_w, const PowerChain& chain, double q_loaded,
                                   double f0_hz);

}  // namespace wgm::chain
