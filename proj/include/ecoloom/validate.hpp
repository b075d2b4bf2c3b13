#pragma once

#include <string>
#include <vector>

#include "ecoloom/model.hpp"

namespace ecoloom {

struct Violation {
  std::string element_id;  // component or relationship id; empty for model-level rules
  std::string rule;        // stable rule name, e.g. "range", "dangling_reference"
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view rule) const;
  bool has(std::string_view element_id, std::string_view rule) const;
  std::string to_text() const;

  bool operator==(const ValidationReport&) const = default;
};

/// Checks a model against the ecology meta-model. Never throws; a model is
/// runnable iff the returned report is empty.
ValidationReport validate_model(const ConceptualModel& m);

}  // namespace ecoloom
