#pragma once

#include <string>

#include "wgmkit/mode_solver.hpp"
#include "wgmkit/power_chain.hpp"

namespace wgm::io {

// {"stages": [{"name": str, "gain_db": num}, ...], "beta1": num, "beta2": num}
// beta2 defaults to 0 when absent. Raises ConfigError on malformed input.
chain::PowerChain load_chain_json(const std::string& path);

// {"m": int, "radius_m": num, "height_m": num, "eps_perp": num,
//  "eps_par": num, "shield_radius_m": num|null}
// The permittivities fall back to the cryogenic sapphire defaults; the
// shield may be null or absent.
modes::ModeSpec load_mode_spec_json(const std::string& path);

}  // namespace wgm::io
