#pragma once

#include "ecoloom/model.hpp"

namespace ecoloom {

/// Default values used when a document omits a parameter. Relationship
/// defaults mirror the worked examples of each relationship kind; component
/// defaults are neutral (no movement, no reproduction, no limits).
namespace defaults {
inline constexpr double kCarbonBiomass = 0.0;  // 0 means "use body_mass"
inline constexpr double kRespiratoryRate = 0.0;
inline constexpr double kPhotosynthesisRate = 0.0;
inline constexpr double kAssimilationEfficiency = 1.0;
inline constexpr double kMoveDirection = 0.0;
inline constexpr double kMoveVelocity = 0.0;
inline constexpr double kLifespan = 0.0;
inline constexpr double kReproductiveMaturity = 0.0;
inline constexpr double kReproductiveInterval = 0.0;
inline constexpr double kOffspringCount = 0.0;
inline constexpr double kStartingPopulation = 0.0;
inline constexpr double kMinimumPopulation = 0.0;
inline constexpr double kBodyMass = 1.0;

inline constexpr double kAmount = 0.0;
inline constexpr double kMinimumAmount = 0.0;
inline constexpr double kAbioticGrowthRate = 0.0;

inline constexpr double kConsumesProbability = 0.10;
inline constexpr double kConsumptionRate = 0.20;
inline constexpr double kDestroysProbability = 0.10;
inline constexpr double kDestructionRate = 0.10;
inline constexpr double kAffectsProbability = 0.50;
inline constexpr double kAffectsGrowthRate = 0.10;
inline constexpr double kProductionRate = 1.0;
}  // namespace defaults

/// Fills every omitted parameter. Idempotent; never overwrites a supplied
/// value. An Affects relationship whose source is abiotic inherits the
/// source's growth_rate when its own is omitted.
ConceptualModel apply_defaults(ConceptualModel m);

}  // namespace ecoloom
