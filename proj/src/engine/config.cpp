#include "ecoloom/config.hpp"

#include <cmath>

#include "ecoloom/errors.hpp"

namespace ecoloom {

void EngineConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid engine config: ") + what);
  };
  auto non_negative = [](double v) { return std::isfinite(v) && v >= 0; };
  require(grid_size >= 1, "grid_size must be >= 1");
  require(max_agents >= 1, "max_agents must be >= 1");
  require(max_ticks >= 0, "max_ticks must be >= 0");
  require(non_negative(seconds_per_tick), "seconds_per_tick must be >= 0");
  require(std::isfinite(meters_per_cell) && meters_per_cell > 0, "meters_per_cell must be > 0");
  require(non_negative(interaction_radius), "interaction_radius must be >= 0");
  require(non_negative(wiggle_degrees), "wiggle_degrees must be >= 0");
  require(non_negative(rate_scale), "rate_scale must be >= 0");
  require(std::isfinite(replenish_fraction) && replenish_fraction >= 0 && replenish_fraction <= 1,
          "replenish_fraction must be in [0,1]");
}

nlohmann::ordered_json config_to_json(const EngineConfig& cfg) {
  nlohmann::ordered_json j;
  j["grid_size"] = cfg.grid_size;
  j["max_agents"] = cfg.max_agents;
  j["seconds_per_tick"] = cfg.seconds_per_tick;
  j["meters_per_cell"] = cfg.meters_per_cell;
  j["interaction_radius"] = cfg.interaction_radius;
  j["wiggle_degrees"] = cfg.wiggle_degrees;
  j["replenish_fraction"] = cfg.replenish_fraction;
  j["max_ticks"] = cfg.max_ticks;
  j["rng_seed"] = cfg.rng_seed;
  j["rate_scale"] = cfg.rate_scale;
  return j;
}

EngineConfig config_from_json(const nlohmann::json& j, EngineConfig cfg) {
  if (!j.is_object()) throw ConfigError("engine config must be a JSON object");
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto& k = it.key();
      const auto& v = it.value();
      if (!v.is_number()) throw ConfigError("engine config key '" + k + "' must be a number");
      if (k == "grid_size") cfg.grid_size = v.get<int>();
      else if (k == "max_agents") cfg.max_agents = v.get<std::int64_t>();
      else if (k == "seconds_per_tick") cfg.seconds_per_tick = v.get<double>();
      else if (k == "meters_per_cell") cfg.meters_per_cell = v.get<double>();
      else if (k == "interaction_radius") cfg.interaction_radius = v.get<double>();
      else if (k == "wiggle_degrees") cfg.wiggle_degrees = v.get<double>();
      else if (k == "replenish_fraction") cfg.replenish_fraction = v.get<double>();
      else if (k == "max_ticks") cfg.max_ticks = v.get<int>();
      else if (k == "rng_seed") cfg.rng_seed = v.get<std::uint64_t>();
      else if (k == "rate_scale") cfg.rate_scale = v.get<double>();
      else throw ConfigError("unknown engine config key '" + k + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid engine config: ") + e.what());
  }
  return cfg;
}

}  // namespace ecoloom
