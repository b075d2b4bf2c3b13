#include "ecoloom/compiler.hpp"

#include <cctype>
#include <set>

#include "ecoloom/defaults.hpp"

namespace ecoloom {

std::string_view to_string(MethodKind k) {
  switch (k) {
    case MethodKind::Lifespan: return "lifespan";
    case MethodKind::MinimumPopulation: return "minimum-population";
    case MethodKind::Biomass: return "biomass";
    case MethodKind::Reproduction: return "reproduction";
    case MethodKind::Movement: return "movement";
    case MethodKind::Consume: return "consume";
    case MethodKind::Destroy: return "destroy";
    case MethodKind::Affect: return "affect";
    case MethodKind::Produce: return "produce";
    case MethodKind::AbioticReplenish: return "abiotic-replenish";
  }
  return "lifespan";
}

std::string procedure_name(MethodKind kind, std::string_view source, std::string_view target) {
  std::string raw(to_string(kind));
  raw += '-';
  raw += source;
  if (!target.empty()) {
    raw += '-';
    raw += target;
  }
  for (char& ch : raw) {
    auto u = static_cast<unsigned char>(ch);
    ch = std::isalnum(u) ? static_cast<char>(std::tolower(u)) : '-';
  }
  return raw;
}

namespace {

MethodKind method_kind(RelationshipKind k) {
  switch (k) {
    case RelationshipKind::Consumes: return MethodKind::Consume;
    case RelationshipKind::Destroys: return MethodKind::Destroy;
    case RelationshipKind::Produces: return MethodKind::Produce;
    case RelationshipKind::Affects: return MethodKind::Affect;
  }
  return MethodKind::Consume;
}

class Lowering {
 public:
  explicit Lowering(const ConceptualModel& m) : model_(m) {}

  SimProgram run() {
    prog_.model_name = model_.name;
    for (const auto& c : model_.components) declare(c);
    for (const auto& c : model_.components) lower_component(c);
    for (const auto& r : model_.relationships) lower_relationship(r);
    return std::move(prog_);
  }

 private:
  void declare(const Component& c) {
    ComponentEntry entry{c.id, c.label(), {}};
    if (const auto* b = c.biotic()) {
      BreedDef def;
      def.component_id = c.id;
      def.name = c.label();
      def.basis = c.population_basis;
      def.initial_biomass = *b->carbon_biomass > 0 ? *b->carbon_biomass : *b->body_mass;
      def.body_mass = *b->body_mass;
      def.assimilation_efficiency = *b->assimilation_efficiency;
      def.starting_population = *b->starting_population;
      def.lifespan = *b->lifespan;
      entry.slot = {SlotType::Breed, prog_.breeds.size()};
      prog_.breeds.push_back(std::move(def));
    } else {
      const auto& a = *c.abiotic();
      entry.slot = {SlotType::Pool, prog_.pools.size()};
      prog_.pools.push_back({c.id, c.label(), *a.amount, *a.minimum_amount, *a.growth_rate});
    }
    prog_.components.push_back(std::move(entry));
  }

  Slot slot_of(std::string_view id) const {
    for (const auto& e : prog_.components) {
      if (e.id == id) return e.slot;
    }
    return {};
  }

  void emit(const std::string& origin, MethodKind kind, Slot subject, Slot target,
            std::string procedure, MethodArgs args) {
    // Sanitizing ids can make two names collide; keep them distinct.
    std::string name = procedure;
    for (int n = 2; !procedures_.insert(name).second; ++n) {
      name = procedure + "-" + std::to_string(n);
    }
    prog_.methods.push_back({origin, kind, subject, target, std::move(name), args});
  }

  void component_method(const Component& c, MethodKind kind, bool active, const char* reason,
                        MethodArgs args) {
    if (!active) {
      prog_.noops.push_back({c.id, kind, reason});
      return;
    }
    Slot s = slot_of(c.id);
    emit(c.id, kind, s, s, procedure_name(kind, c.id), args);
  }

  void lower_component(const Component& c) {
    if (const auto* b = c.biotic()) {
      component_method(c, MethodKind::Lifespan, *b->lifespan > 0, "lifespan is 0 (no age limit)",
                       LifespanArgs{*b->lifespan});
      component_method(c, MethodKind::MinimumPopulation, *b->minimum_population > 0,
                       "minimum_population is 0", MinimumPopulationArgs{*b->minimum_population});
      component_method(c, MethodKind::Biomass, *b->photosynthesis_rate != *b->respiratory_rate,
                       "photosynthesis_rate equals respiratory_rate",
                       BiomassArgs{*b->photosynthesis_rate, *b->respiratory_rate});
      component_method(c, MethodKind::Reproduction, *b->offspring_count > 0,
                       "offspring_count is 0",
                       ReproductionArgs{*b->reproductive_maturity, *b->reproductive_interval,
                                        *b->offspring_count});
      component_method(c, MethodKind::Movement, *b->move_velocity > 0, "move_velocity is 0",
                       MovementArgs{*b->move_direction, *b->move_velocity});
    } else {
      const auto& a = *c.abiotic();
      component_method(c, MethodKind::AbioticReplenish, *a.minimum_amount > 0,
                       "minimum_amount is 0", ReplenishArgs{*a.minimum_amount});
    }
  }

  void lower_relationship(const Relationship& r) {
    const auto& p = r.params;
    MethodArgs args;
    switch (r.kind) {
      case RelationshipKind::Consumes: {
        const auto* src = model_.find_component(r.source)->biotic();
        args = ConsumeArgs{*p.interaction_probability, *p.consumption_rate,
                           *src->assimilation_efficiency};
        break;
      }
      case RelationshipKind::Destroys:
        args = DestroyArgs{*p.interaction_probability, *p.destruction_rate};
        break;
      case RelationshipKind::Affects:
        args = AffectArgs{*p.interaction_probability, *p.growth_rate};
        break;
      case RelationshipKind::Produces:
        args = ProduceArgs{*p.production_rate};
        break;
    }
    MethodKind kind = method_kind(r.kind);
    emit(r.id, kind, slot_of(r.source), slot_of(r.target),
         procedure_name(kind, r.source, r.target), args);
  }

  const ConceptualModel& model_;
  SimProgram prog_;
  std::set<std::string> procedures_;
};

}  // namespace

SimProgram compile(const ConceptualModel& m) {
  ConceptualModel resolved = apply_defaults(m);
  ValidationReport report = validate_model(resolved);
  if (!report.ok()) throw CompileError(std::move(report));
  return Lowering(resolved).run();
}

}  // namespace ecoloom
