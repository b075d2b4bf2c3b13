#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ecoloom {

enum class ComponentKind { Biotic, Abiotic };
enum class PopulationBasis { Individuals, AreaDensity };
enum class RelationshipKind { Consumes, Destroys, Produces, Affects };

// Every parameter is optional so that a parsed document remembers which
// values the author supplied. apply_defaults() fills the gaps.

struct BioticParams {
  std::optional<double> carbon_biomass;           // kg per individual (or per m^2)
  std::optional<double> respiratory_rate;         // kg/s
  std::optional<double> photosynthesis_rate;      // kg/s
  std::optional<double> assimilation_efficiency;  // [0,1]
  std::optional<double> move_direction;           // compass degrees [0,360)
  std::optional<double> move_velocity;            // m/s
  std::optional<double> lifespan;                 // months
  std::optional<double> reproductive_maturity;    // months
  std::optional<double> reproductive_interval;    // months
  std::optional<double> offspring_count;
  std::optional<double> starting_population;
  std::optional<double> minimum_population;
  std::optional<double> body_mass;  // kg

  bool operator==(const BioticParams&) const = default;
};

struct AbioticParams {
  std::optional<double> amount;          // kg
  std::optional<double> minimum_amount;  // kg
  std::optional<double> growth_rate;     // fraction

  bool operator==(const AbioticParams&) const = default;
};

struct Component {
  std::string id;
  std::string display_name;
  ComponentKind kind = ComponentKind::Biotic;
  std::variant<BioticParams, AbioticParams> params;
  PopulationBasis population_basis = PopulationBasis::Individuals;

  bool is_biotic() const { return kind == ComponentKind::Biotic; }
  const BioticParams* biotic() const { return std::get_if<BioticParams>(&params); }
  const AbioticParams* abiotic() const { return std::get_if<AbioticParams>(&params); }
  BioticParams* biotic() { return std::get_if<BioticParams>(&params); }
  AbioticParams* abiotic() { return std::get_if<AbioticParams>(&params); }
  /// display_name, or id when no display name was given.
  const std::string& label() const { return display_name.empty() ? id : display_name; }

  bool operator==(const Component&) const = default;
};

struct RelationshipParams {
  std::optional<double> interaction_probability;  // Consumes, Destroys, Affects
  std::optional<double> consumption_rate;         // Consumes
  std::optional<double> destruction_rate;         // Destroys
  std::optional<double> growth_rate;              // Affects
  std::optional<double> production_rate;          // Produces, kg/s

  bool operator==(const RelationshipParams&) const = default;
};

struct Relationship {
  std::string id;
  RelationshipKind kind = RelationshipKind::Consumes;
  std::string source;
  std::string target;
  RelationshipParams params;

  bool operator==(const Relationship&) const = default;
};

struct ConceptualModel {
  std::string id;
  std::string name;
  std::string project_id;
  std::vector<Component> components;
  std::vector<Relationship> relationships;
  std::optional<std::string> notes;

  const Component* find_component(std::string_view id) const;
  Component* find_component(std::string_view id);

  bool operator==(const ConceptualModel&) const = default;
};

std::string_view to_string(ComponentKind k);
std::string_view to_string(PopulationBasis b);
std::string_view to_string(RelationshipKind k);
std::optional<ComponentKind> component_kind_from_string(std::string_view s);
std::optional<PopulationBasis> population_basis_from_string(std::string_view s);
std::optional<RelationshipKind> relationship_kind_from_string(std::string_view s);

/// Whether parameter `name` belongs to relationships of kind `k`.
bool relationship_has_param(RelationshipKind k, std::string_view name);

/// Random RFC 4122 version-4 identifier.
std::string generate_id();

/// Shortest decimal text that parses back to exactly `v`.
std::string format_number(double v);

}  // namespace ecoloom
