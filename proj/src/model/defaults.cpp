#include "ecoloom/defaults.hpp"

namespace ecoloom {
namespace {

void fill(std::optional<double>& slot, double value) {
  if (!slot) slot = value;
}

}  // namespace

ConceptualModel apply_defaults(ConceptualModel m) {
  using namespace defaults;
  for (auto& c : m.components) {
    if (auto* b = c.biotic()) {
      fill(b->carbon_biomass, kCarbonBiomass);
      fill(b->respiratory_rate, kRespiratoryRate);
      fill(b->photosynthesis_rate, kPhotosynthesisRate);
      fill(b->assimilation_efficiency, kAssimilationEfficiency);
      fill(b->move_direction, kMoveDirection);
      fill(b->move_velocity, kMoveVelocity);
      fill(b->lifespan, kLifespan);
      fill(b->reproductive_maturity, kReproductiveMaturity);
      fill(b->reproductive_interval, kReproductiveInterval);
      fill(b->offspring_count, kOffspringCount);
      fill(b->starting_population, kStartingPopulation);
      fill(b->minimum_population, kMinimumPopulation);
      fill(b->body_mass, kBodyMass);
    } else if (auto* a = c.abiotic()) {
      fill(a->amount, kAmount);
      fill(a->minimum_amount, kMinimumAmount);
      fill(a->growth_rate, kAbioticGrowthRate);
    }
  }
  for (auto& r : m.relationships) {
    auto& p = r.params;
    switch (r.kind) {
      case RelationshipKind::Consumes:
        fill(p.interaction_probability, kConsumesProbability);
        fill(p.consumption_rate, kConsumptionRate);
        break;
      case RelationshipKind::Destroys:
        fill(p.interaction_probability, kDestroysProbability);
        fill(p.destruction_rate, kDestructionRate);
        break;
      case RelationshipKind::Affects: {
        fill(p.interaction_probability, kAffectsProbability);
        const Component* src = m.find_component(r.source);
        if (src && src->abiotic() && src->abiotic()->growth_rate) {
          fill(p.growth_rate, *src->abiotic()->growth_rate);
        }
        fill(p.growth_rate, kAffectsGrowthRate);
        break;
      }
      case RelationshipKind::Produces:
        fill(p.production_rate, kProductionRate);
        break;
    }
  }
  return m;
}

}  // namespace ecoloom
