#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "ecoloom/model.hpp"

namespace ecoloom {

template <typename Params>
struct ParamField {
  std::string_view name;
  std::optional<double> Params::*member;
};

// Declaration order here is the document order used by serialize_model.
inline constexpr std::array<ParamField<BioticParams>, 13> kBioticFields{{
    {"carbon_biomass", &BioticParams::carbon_biomass},
    {"respiratory_rate", &BioticParams::respiratory_rate},
    {"photosynthesis_rate", &BioticParams::photosynthesis_rate},
    {"assimilation_efficiency", &BioticParams::assimilation_efficiency},
    {"move_direction", &BioticParams::move_direction},
    {"move_velocity", &BioticParams::move_velocity},
    {"lifespan", &BioticParams::lifespan},
    {"reproductive_maturity", &BioticParams::reproductive_maturity},
    {"reproductive_interval", &BioticParams::reproductive_interval},
    {"offspring_count", &BioticParams::offspring_count},
    {"starting_population", &BioticParams::starting_population},
    {"minimum_population", &BioticParams::minimum_population},
    {"body_mass", &BioticParams::body_mass},
}};

inline constexpr std::array<ParamField<AbioticParams>, 3> kAbioticFields{{
    {"amount", &AbioticParams::amount},
    {"minimum_amount", &AbioticParams::minimum_amount},
    {"growth_rate", &AbioticParams::growth_rate},
}};

inline constexpr std::array<ParamField<RelationshipParams>, 5> kRelationshipFields{{
    {"interaction_probability", &RelationshipParams::interaction_probability},
    {"consumption_rate", &RelationshipParams::consumption_rate},
    {"destruction_rate", &RelationshipParams::destruction_rate},
    {"growth_rate", &RelationshipParams::growth_rate},
    {"production_rate", &RelationshipParams::production_rate},
}};

}  // namespace ecoloom
