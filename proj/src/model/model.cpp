#include "ecoloom/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>
#include <utility>

namespace ecoloom {

const Component* ConceptualModel::find_component(std::string_view cid) const {
  auto it = std::find_if(components.begin(), components.end(),
                         [&](const Component& c) { return c.id == cid; });
  return it == components.end() ? nullptr : &*it;
}

Component* ConceptualModel::find_component(std::string_view cid) {
  return const_cast<Component*>(std::as_const(*this).find_component(cid));
}

std::string_view to_string(ComponentKind k) {
  return k == ComponentKind::Biotic ? "biotic" : "abiotic";
}

std::string_view to_string(PopulationBasis b) {
  return b == PopulationBasis::Individuals ? "individuals" : "area_density";
}

std::string_view to_string(RelationshipKind k) {
  switch (k) {
    case RelationshipKind::Consumes: return "consumes";
    case RelationshipKind::Destroys: return "destroys";
    case RelationshipKind::Produces: return "produces";
    case RelationshipKind::Affects: return "affects";
  }
  return "consumes";
}

std::optional<ComponentKind> component_kind_from_string(std::string_view s) {
  if (s == "biotic") return ComponentKind::Biotic;
  if (s == "abiotic") return ComponentKind::Abiotic;
  return std::nullopt;
}

std::optional<PopulationBasis> population_basis_from_string(std::string_view s) {
  if (s == "individuals") return PopulationBasis::Individuals;
  if (s == "area_density") return PopulationBasis::AreaDensity;
  return std::nullopt;
}

std::optional<RelationshipKind> relationship_kind_from_string(std::string_view s) {
  for (auto k : {RelationshipKind::Consumes, RelationshipKind::Destroys,
                 RelationshipKind::Produces, RelationshipKind::Affects}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

bool relationship_has_param(RelationshipKind k, std::string_view name) {
  switch (k) {
    case RelationshipKind::Consumes:
      return name == "interaction_probability" || name == "consumption_rate";
    case RelationshipKind::Destroys:
      return name == "interaction_probability" || name == "destruction_rate";
    case RelationshipKind::Affects:
      return name == "interaction_probability" || name == "growth_rate";
    case RelationshipKind::Produces:
      return name == "production_rate";
  }
  return false;
}

std::string generate_id() {
  static thread_local std::mt19937_64 gen{std::random_device{}()};
  std::uniform_int_distribution<unsigned> nibble(0, 15);
  constexpr std::string_view hex = "0123456789abcdef";
  std::string out;
  out.reserve(36);
  for (int i = 0; i < 32; ++i) {
    if (i == 8 || i == 12 || i == 16 || i == 20) out.push_back('-');
    unsigned v = nibble(gen);
    if (i == 12) v = 4;
    if (i == 16) v = 8 | (v & 3);
    out.push_back(hex[v]);
  }
  return out;
}

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace ecoloom
