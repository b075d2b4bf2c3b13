#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "ecoloom/config.hpp"
#include "ecoloom/model.hpp"

namespace ecoloom {

enum class ExemplarId { LogisticGrowth, ExponentialGrowth, PredatorPrey, CompetitiveExclusion };

struct Exemplar {
  ConceptualModel model;
  EngineConfig config;  // seed, rate_scale and ticks the dynamics were tuned under
};

std::span<const ExemplarId> all_exemplars();

/// File-style name, e.g. "predator_prey".
std::string_view slug(ExemplarId id);
std::string_view title(ExemplarId id);

/// Accepts the slug or the CamelCase enumerator name.
std::optional<ExemplarId> exemplar_from_string(std::string_view s);

/// The shipped model document, verbatim.
std::string_view exemplar_document(ExemplarId id);
std::string_view exemplar_config_document(ExemplarId id);

Exemplar load_exemplar(ExemplarId id);

}  // namespace ecoloom
