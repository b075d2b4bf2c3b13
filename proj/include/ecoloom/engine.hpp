#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ecoloom/config.hpp"
#include "ecoloom/program.hpp"
#include "ecoloom/world.hpp"

namespace ecoloom {

/// Which kernel family the engine uses for its data-parallel loops.
/// Results are identical; Serial exists as the reference.
enum class ExecutionPolicy { Parallel, Serial };

/// Per-tick population levels of one run, in model declaration order.
struct TimeSeries {
  std::vector<std::string> component_ids;
  std::vector<std::string> labels;
  std::vector<PopulationRecord> records;

  /// `Month,<label>,...` header, then one row of integer counts per record.
  std::string to_csv() const;

  bool operator==(const TimeSeries&) const = default;
};

std::string csv_header(const SimProgram& p);
std::string csv_row(const PopulationRecord& r);

/// Places each breed's starting population uniformly at random, breed by
/// breed in declaration order; sets pools to their starting amounts.
/// Throws CapacityError if the starting populations exceed max_agents and
/// ConfigError for an invalid config.
WorldState init_world(const SimProgram& p, const EngineConfig& cfg);

/// Population levels of the world as it stands.
PopulationRecord snapshot(const WorldState& w, const SimProgram& p);

/// Advances one tick: ages every agent, runs each scheduled method in order
/// over live agents in ascending id order, drops the dead, bumps the tick.
PopulationRecord tick(WorldState& w, const SimProgram& p,
                      ExecutionPolicy policy = ExecutionPolicy::Parallel);

/// Runs a single scheduled method against the world (no aging, no cleanup).
void execute_method(WorldState& w, const SimProgram& p, std::size_t method_index,
                    ExecutionPolicy policy = ExecutionPolicy::Parallel);

/// Removes agents marked dead, preserving id order.
void remove_dead(WorldState& w);

/// Receives each record as soon as it is produced; return false to stop.
using RecordSink = std::function<bool(const PopulationRecord&)>;

/// Record for tick 0, then one per tick up to cfg.max_ticks.
TimeSeries run(const SimProgram& p, const EngineConfig& cfg, const RecordSink& sink = {},
               ExecutionPolicy policy = ExecutionPolicy::Parallel);

}  // namespace ecoloom
