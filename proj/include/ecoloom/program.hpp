#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ecoloom/model.hpp"

namespace ecoloom {

/// Resolved (defaults applied) parameters of one biotic Component.
struct BreedDef {
  std::string component_id;
  std::string name;
  PopulationBasis basis = PopulationBasis::Individuals;
  double initial_biomass = 0;  // carbon_biomass if > 0, else body_mass
  double body_mass = 0;
  double assimilation_efficiency = 1;
  double starting_population = 0;
  double lifespan = 0;  // 0 disables the age limit

  bool operator==(const BreedDef&) const = default;
};

struct PoolDef {
  std::string component_id;
  std::string name;
  double amount = 0;
  double minimum_amount = 0;
  double growth_rate = 0;

  bool operator==(const PoolDef&) const = default;
};

enum class SlotType { Breed, Pool };

/// A Component as seen by the engine: which table it lives in and where.
struct Slot {
  SlotType type = SlotType::Breed;
  std::size_t index = 0;

  bool operator==(const Slot&) const = default;
};

enum class MethodKind {
  Lifespan,
  MinimumPopulation,
  Biomass,
  Reproduction,
  Movement,
  Consume,
  Destroy,
  Affect,
  Produce,
  AbioticReplenish,
};

std::string_view to_string(MethodKind k);

struct LifespanArgs {
  double limit;
  bool operator==(const LifespanArgs&) const = default;
};
struct MinimumPopulationArgs {
  double minimum;
  bool operator==(const MinimumPopulationArgs&) const = default;
};
struct BiomassArgs {
  double photosynthesis_rate;
  double respiratory_rate;
  bool operator==(const BiomassArgs&) const = default;
};
struct ReproductionArgs {
  double maturity;
  double interval;
  double offspring_count;
  bool operator==(const ReproductionArgs&) const = default;
};
struct MovementArgs {
  double direction;
  double velocity;
  bool operator==(const MovementArgs&) const = default;
};
struct ConsumeArgs {
  double probability;
  double rate;
  double assimilation_efficiency;  // of the consuming breed
  bool operator==(const ConsumeArgs&) const = default;
};
struct DestroyArgs {
  double probability;
  double rate;
  bool operator==(const DestroyArgs&) const = default;
};
struct AffectArgs {
  double probability;
  double growth_rate;
  bool operator==(const AffectArgs&) const = default;
};
struct ProduceArgs {
  double production_rate;
  bool operator==(const ProduceArgs&) const = default;
};
struct ReplenishArgs {
  double minimum_amount;
  bool operator==(const ReplenishArgs&) const = default;
};

using MethodArgs =
    std::variant<LifespanArgs, MinimumPopulationArgs, BiomassArgs, ReproductionArgs,
                 MovementArgs, ConsumeArgs, DestroyArgs, AffectArgs, ProduceArgs, ReplenishArgs>;

struct MethodDef {
  std::string origin;  // Component or Relationship id
  MethodKind kind = MethodKind::Lifespan;
  Slot subject;  // the Component itself, or the relationship's source
  Slot target;   // relationship target; equals subject for component methods
  std::string procedure;  // NetLogo procedure name
  MethodArgs args;

  bool operator==(const MethodDef&) const = default;
};

/// A method the compiler left out because its parameters make it inert.
struct NoopEntry {
  std::string origin;
  MethodKind kind = MethodKind::Lifespan;
  std::string reason;

  bool operator==(const NoopEntry&) const = default;
};

struct ComponentEntry {
  std::string id;
  std::string label;
  Slot slot;

  bool operator==(const ComponentEntry&) const = default;
};

struct SimProgram {
  std::string model_name;
  std::vector<ComponentEntry> components;  // model declaration order
  std::vector<BreedDef> breeds;
  std::vector<PoolDef> pools;
  std::vector<MethodDef> methods;  // schedule order
  std::vector<NoopEntry> noops;

  bool operator==(const SimProgram&) const = default;
};

}  // namespace ecoloom
