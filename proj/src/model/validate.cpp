#include "ecoloom/validate.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include "ecoloom/defaults.hpp"
#include "ecoloom/param_fields.hpp"

namespace ecoloom {

bool ValidationReport::has(std::string_view rule) const {
  for (const auto& v : violations) {
    if (v.rule == rule) return true;
  }
  return false;
}

bool ValidationReport::has(std::string_view element_id, std::string_view rule) const {
  for (const auto& v : violations) {
    if (v.element_id == element_id && v.rule == rule) return true;
  }
  return false;
}

std::string ValidationReport::to_text() const {
  std::ostringstream out;
  for (const auto& v : violations) {
    out << (v.element_id.empty() ? "<model>" : v.element_id) << ": [" << v.rule << "] "
        << v.message << "\n";
  }
  return out.str();
}

namespace {

class Checker {
 public:
  explicit Checker(ValidationReport& report) : report_(report) {}

  void add(const std::string& id, std::string rule, std::string message) {
    report_.violations.push_back({id, std::move(rule), std::move(message)});
  }

  // Checks the value only if it was supplied; omitted values get defaults
  // that are always in range.
  void range(const std::string& id, std::string_view name, const std::optional<double>& v,
             double lo, double hi, bool hi_inclusive = true) {
    if (!v) return;
    bool ok = std::isfinite(*v) && *v >= lo && (hi_inclusive ? *v <= hi : *v < hi);
    if (!ok) {
      std::ostringstream msg;
      msg << name << " = " << format_number(*v) << " outside ["
          << format_number(lo) << ", ";
      if (std::isinf(hi)) {
        msg << "inf)";
      } else {
        msg << format_number(hi) << (hi_inclusive ? "]" : ")");
      }
      add(id, "range", msg.str());
    }
  }

  void integral(const std::string& id, std::string_view name, const std::optional<double>& v) {
    if (v && std::isfinite(*v) && std::floor(*v) != *v) {
      add(id, "integer", std::string(name) + " must be a whole number");
    }
  }

 private:
  ValidationReport& report_;
};

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_biotic(Checker& ck, const Component& c, const BioticParams& raw) {
  const std::string& id = c.id;
  ck.range(id, "carbon_biomass", raw.carbon_biomass, 0, kInf);
  ck.range(id, "respiratory_rate", raw.respiratory_rate, 0, kInf);
  ck.range(id, "photosynthesis_rate", raw.photosynthesis_rate, 0, kInf);
  ck.range(id, "assimilation_efficiency", raw.assimilation_efficiency, 0, 1);
  ck.range(id, "move_direction", raw.move_direction, 0, 360, false);
  ck.range(id, "move_velocity", raw.move_velocity, 0, kInf);
  ck.range(id, "lifespan", raw.lifespan, 0, kInf);
  ck.range(id, "reproductive_maturity", raw.reproductive_maturity, 0, kInf);
  ck.range(id, "reproductive_interval", raw.reproductive_interval, 0, kInf);
  ck.range(id, "offspring_count", raw.offspring_count, 0, kInf);
  ck.range(id, "starting_population", raw.starting_population, 0, kInf);
  ck.range(id, "minimum_population", raw.minimum_population, 0, kInf);
  ck.range(id, "body_mass", raw.body_mass, 0, kInf);
  ck.integral(id, "lifespan", raw.lifespan);
  ck.integral(id, "reproductive_maturity", raw.reproductive_maturity);
  ck.integral(id, "reproductive_interval", raw.reproductive_interval);
  ck.integral(id, "starting_population", raw.starting_population);
  ck.integral(id, "minimum_population", raw.minimum_population);

  BioticParams b = raw;
  if (!b.offspring_count) b.offspring_count = defaults::kOffspringCount;
  if (!b.reproductive_interval) b.reproductive_interval = defaults::kReproductiveInterval;
  if (!b.carbon_biomass) b.carbon_biomass = defaults::kCarbonBiomass;
  if (!b.body_mass) b.body_mass = defaults::kBodyMass;
  if (*b.offspring_count > 0 && !(*b.reproductive_interval > 0)) {
    ck.add(id, "reproduction_interval",
           "offspring_count > 0 requires reproductive_interval > 0");
  }
  if (!(*b.carbon_biomass > 0) && !(*b.body_mass > 0)) {
    ck.add(id, "initial_biomass",
           "agents need a positive carbon_biomass or body_mass to be alive");
  }
}

void check_abiotic(Checker& ck, const Component& c, const AbioticParams& a) {
  ck.range(c.id, "amount", a.amount, 0, kInf);
  ck.range(c.id, "minimum_amount", a.minimum_amount, 0, kInf);
  ck.range(c.id, "growth_rate", a.growth_rate, -1, kInf);
}

void check_relationship(Checker& ck, const ConceptualModel& m, const Relationship& r) {
  const std::string& id = r.id;
  for (const auto& f : kRelationshipFields) {
    if ((r.params.*(f.member)).has_value() && !relationship_has_param(r.kind, f.name)) {
      ck.add(id, "params_kind_mismatch",
             std::string(f.name) + " does not belong to " + std::string(to_string(r.kind)));
    }
  }
  const auto& p = r.params;
  ck.range(id, "interaction_probability", p.interaction_probability, 0, 1);
  ck.range(id, "consumption_rate", p.consumption_rate, 0, 1);
  ck.range(id, "destruction_rate", p.destruction_rate, 0, 1);
  ck.range(id, "growth_rate", p.growth_rate, -1, kInf);
  ck.range(id, "production_rate", p.production_rate, 0, kInf);

  const Component* src = m.find_component(r.source);
  const Component* dst = m.find_component(r.target);
  if (!src) ck.add(id, "dangling_reference", "source '" + r.source + "' does not exist");
  if (!dst) ck.add(id, "dangling_reference", "target '" + r.target + "' does not exist");
  if (!src || !dst) return;

  auto kind = std::string(to_string(r.kind));
  bool needs_biotic_source = r.kind == RelationshipKind::Consumes ||
                             r.kind == RelationshipKind::Destroys ||
                             r.kind == RelationshipKind::Produces;
  if (needs_biotic_source && !src->is_biotic()) {
    ck.add(id, "endpoint_kind", kind + " source '" + src->id + "' must be biotic");
  }
  if (r.kind == RelationshipKind::Consumes && !dst->is_biotic()) {
    ck.add(id, "endpoint_kind", kind + " target '" + dst->id + "' must be biotic");
  }
}

}  // namespace

ValidationReport validate_model(const ConceptualModel& m) {
  ValidationReport report;
  Checker ck(report);

  std::set<std::string> component_ids;
  for (const auto& c : m.components) {
    if (c.id.empty()) ck.add(c.id, "empty_id", "component id must not be empty");
    if (!component_ids.insert(c.id).second) {
      ck.add(c.id, "duplicate_component_id", "component id '" + c.id + "' is not unique");
    }
    const bool biotic_params = c.biotic() != nullptr;
    if (biotic_params != c.is_biotic()) {
      ck.add(c.id, "params_kind_mismatch",
             std::string(to_string(c.kind)) + " component carries the wrong parameter set");
      continue;
    }
    if (c.population_basis == PopulationBasis::AreaDensity && !c.is_biotic()) {
      ck.add(c.id, "area_density_abiotic", "area-density populations must be biotic");
    }
    if (const auto* b = c.biotic()) check_biotic(ck, c, *b);
    if (const auto* a = c.abiotic()) check_abiotic(ck, c, *a);
  }

  std::set<std::string> relationship_ids;
  std::set<std::tuple<RelationshipKind, std::string, std::string>> edges;
  for (const auto& r : m.relationships) {
    if (r.id.empty()) ck.add(r.id, "empty_id", "relationship id must not be empty");
    if (!relationship_ids.insert(r.id).second) {
      ck.add(r.id, "duplicate_relationship_id", "relationship id '" + r.id + "' is not unique");
    }
    if (!edges.insert({r.kind, r.source, r.target}).second) {
      ck.add(r.id, "duplicate_relationship",
             "another " + std::string(to_string(r.kind)) + " relationship already links '" +
                 r.source + "' to '" + r.target + "'");
    }
    check_relationship(ck, m, r);
  }
  return report;
}

}  // namespace ecoloom
