#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

namespace ecoloom {

struct EngineConfig {
  int grid_size = 32;                   // cells per side
  std::int64_t max_agents = 25000;
  double seconds_per_tick = 2592000.0;  // 30 days
  double meters_per_cell = 1.0;
  double interaction_radius = 1.0;      // cells
  double wiggle_degrees = 45.0;
  double replenish_fraction = 0.25;     // of the minimum-population deficit, per tick
  int max_ticks = 120;
  std::uint64_t rng_seed = 0;
  /// Normalizes kg/s rates to the tick: a rate r contributes
  /// r * seconds_per_tick * rate_scale per tick.
  double rate_scale = 1.0;

  /// Throws ConfigError when a field is out of its domain.
  void validate() const;

  bool operator==(const EngineConfig&) const = default;
};

nlohmann::ordered_json config_to_json(const EngineConfig& cfg);

/// Overlays the keys present in `j` onto `base`. Unknown keys throw ConfigError.
EngineConfig config_from_json(const nlohmann::json& j, EngineConfig base = {});

}  // namespace ecoloom
