#include "wgmkit/config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "wgmkit/errors.hpp"

namespace wgm::io {

namespace {

nlohmann::json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  try {
    return nlohmann::json::parse(f);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

double require_number(const nlohmann::json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw ConfigError(path + ": missing key '" + key + "'");
  if (!j[key].is_number()) throw ConfigError(path + ": '" + key + "' must be a number");
  return j[key].get<double>();
}

}  // namespace

chain::PowerChain load_chain_json(const std::string& path) {
  const nlohmann::json j = load_json(path);
  if (!j.is_object()) throw ConfigError(path + ": top level must be an object");

  chain::PowerChain chain;
  if (!j.contains("stages") || !j["stages"].is_array())
    throw ConfigError(path + ": 'stages' must be an array");
  for (const auto& st : j["stages"]) {
    if (!st.is_object()) throw ConfigError(path + ": each stage must be an object");
    chain::ChainStage stage;
    if (!st.contains("name") || !st["name"].is_string())
      throw ConfigError(path + ": each stage needs a string 'name'");
    stage.name = st["name"].get<std::string>();
    stage.gain_db = require_number(st, "gain_db", path);
    chain.stages.push_back(std::move(stage));
  }
  chain.beta1 = require_number(j, "beta1", path);
  chain.beta2 = j.contains("beta2") && !j["beta2"].is_null()
                    ? require_number(j, "beta2", path)
                    : 0.0;
  try {
    chain.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return chain;
}

modes::ModeSpec load_mode_spec_json(const std::string& path) {
  const nlohmann::json j = load_json(path);
  if (!j.is_object()) throw ConfigError(path + ": top level must be an object");

  modes::ModeSpec spec;
  if (!j.contains("m") || !j["m"].is_number_integer())
    throw ConfigError(path + ": 'm' must be an integer");
  spec.azimuthal_m = j["m"].get<int>();
  spec.radius_m = require_number(j, "radius_m", path);
  spec.height_m = require_number(j, "height_m", path);
  if (j.contains("eps_perp")) spec.eps_perp = require_number(j, "eps_perp", path);
  if (j.contains("eps_par")) spec.eps_par = require_number(j, "eps_par", path);
  if (j.contains("shield_radius_m") && !j["shield_radius_m"].is_null())
    spec.shield_radius_m = require_number(j, "shield_radius_m", path);
  try {
    spec.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return spec;
}

}  // namespace wgm::io
