#include <nlohmann/json.hpp>

#include "ecoloom/compiler.hpp"

namespace ecoloom {
namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json slot_json(const SimProgram& p, const Slot& s) {
  ordered_json j;
  j["type"] = s.type == SlotType::Breed ? "breed" : "pool";
  j["component"] = s.type == SlotType::Breed ? p.breeds[s.index].component_id
                                             : p.pools[s.index].component_id;
  return j;
}

ordered_json args_json(const MethodArgs& args) {
  return std::visit(
      [](const auto& a) -> ordered_json {
        using T = std::decay_t<decltype(a)>;
        ordered_json j = ordered_json::object();
        if constexpr (std::is_same_v<T, LifespanArgs>) {
          j["limit"] = a.limit;
        } else if constexpr (std::is_same_v<T, MinimumPopulationArgs>) {
          j["minimum"] = a.minimum;
        } else if constexpr (std::is_same_v<T, BiomassArgs>) {
          j["photosynthesis_rate"] = a.photosynthesis_rate;
          j["respiratory_rate"] = a.respiratory_rate;
        } else if constexpr (std::is_same_v<T, ReproductionArgs>) {
          j["maturity"] = a.maturity;
          j["interval"] = a.interval;
          j["offspring_count"] = a.offspring_count;
        } else if constexpr (std::is_same_v<T, MovementArgs>) {
          j["direction"] = a.direction;
          j["velocity"] = a.velocity;
        } else if constexpr (std::is_same_v<T, ConsumeArgs>) {
          j["probability"] = a.probability;
          j["rate"] = a.rate;
          j["assimilation_efficiency"] = a.assimilation_efficiency;
        } else if constexpr (std::is_same_v<T, DestroyArgs>) {
          j["probability"] = a.probability;
          j["rate"] = a.rate;
        } else if constexpr (std::is_same_v<T, AffectArgs>) {
          j["probability"] = a.probability;
          j["growth_rate"] = a.growth_rate;
        } else if constexpr (std::is_same_v<T, ProduceArgs>) {
          j["production_rate"] = a.production_rate;
        } else if constexpr (std::is_same_v<T, ReplenishArgs>) {
          j["minimum_amount"] = a.minimum_amount;
        }
        return j;
      },
      args);
}

}  // namespace

std::string emit_ir(const SimProgram& p) {
  ordered_json j;
  j["model_name"] = p.model_name;
  ordered_json breeds = ordered_json::array();
  for (const auto& b : p.breeds) {
    ordered_json e;
    e["component"] = b.component_id;
    e["name"] = b.name;
    e["basis"] = to_string(b.basis);
    e["initial_biomass"] = b.initial_biomass;
    e["body_mass"] = b.body_mass;
    e["assimilation_efficiency"] = b.assimilation_efficiency;
    e["starting_population"] = b.starting_population;
    e["lifespan"] = b.lifespan;
    breeds.push_back(std::move(e));
  }
  j["breeds"] = std::move(breeds);
  ordered_json pools = ordered_json::array();
  for (const auto& pl : p.pools) {
    ordered_json e;
    e["component"] = pl.component_id;
    e["name"] = pl.name;
    e["amount"] = pl.amount;
    e["minimum_amount"] = pl.minimum_amount;
    e["growth_rate"] = pl.growth_rate;
    pools.push_back(std::move(e));
  }
  j["pools"] = std::move(pools);
  ordered_json methods = ordered_json::array();
  for (const auto& m : p.methods) {
    ordered_json e;
    e["procedure"] = m.procedure;
    e["origin"] = m.origin;
    e["kind"] = to_string(m.kind);
    e["subject"] = slot_json(p, m.subject);
    e["target"] = slot_json(p, m.target);
    e["args"] = args_json(m.args);
    methods.push_back(std::move(e));
  }
  j["methods"] = std::move(methods);
  ordered_json noops = ordered_json::array();
  for (const auto& n : p.noops) {
    noops.push_back({{"origin", n.origin}, {"kind", to_string(n.kind)}, {"reason", n.reason}});
  }
  j["noops"] = std::move(noops);
  return j.dump(2) + "\n";
}

}  // namespace ecoloom
