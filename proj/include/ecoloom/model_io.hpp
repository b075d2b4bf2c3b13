#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "ecoloom/model.hpp"

namespace ecoloom {

enum class DocumentFormat { Json, Xml };

/// Parses a model document. Throws ParseError on malformed input, unknown
/// keys or kinds, non-finite numbers, and dangling relationship endpoints.
/// Domain ranges are left to validate_model().
ConceptualModel parse_model(std::string_view document, DocumentFormat format);

/// Guesses the format from the first non-blank character ('<' means XML).
ConceptualModel parse_model(std::string_view document);

std::string serialize_model(const ConceptualModel& m, DocumentFormat format);

nlohmann::ordered_json model_to_json(const ConceptualModel& m);
ConceptualModel model_from_json(const nlohmann::json& doc);

}  // namespace ecoloom
