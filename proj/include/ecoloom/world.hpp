#pragma once

#include <cstdint>
#include <vector>

#include "ecoloom/config.hpp"
#include "ecoloom/rng.hpp"

namespace ecoloom {

struct Agent {
  std::uint64_t id = 0;
  std::uint32_t breed = 0;  // index into SimProgram::breeds
  double x = 0;
  double y = 0;
  double heading = 0;  // compass degrees, 0 = +y, 90 = +x
  std::int64_t age = 0;  // ticks
  double carbon_biomass = 0;
  bool alive = true;

  bool operator==(const Agent&) const = default;
};

struct BreedState {
  std::int64_t live = 0;
  double boost = 1.0;       // spawn-count multiplier in effect this tick
  double next_boost = 1.0;  // accumulated by Affects for the next tick
  double reproduction_carry = 0.0;
  double replenish_carry = 0.0;

  bool operator==(const BreedState&) const = default;
};

struct WorldState {
  EngineConfig config;
  std::int64_t tick = 0;
  std::vector<Agent> agents;  // ascending id; dead agents linger until tick end
  std::vector<double> pools;  // by SimProgram::pools index
  std::vector<BreedState> breeds;
  std::vector<double> produce_accumulators;  // by method index
  Rng rng;
  std::uint64_t next_agent_id = 0;
  std::int64_t live_agents = 0;

  bool operator==(const WorldState&) const = default;
};

struct PopulationRecord {
  std::int64_t tick = 0;  // months
  /// One entry per model Component in declaration order: live agents (or
  /// m^2 units) for biotic, pool amount in kg for abiotic.
  std::vector<double> counts;

  bool operator==(const PopulationRecord&) const = default;
};

}  // namespace ecoloom
