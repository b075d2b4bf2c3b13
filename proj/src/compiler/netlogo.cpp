// NetLogo-dialect backend. The emitted text uses only breeds, turtles-own,
// globals, ask/hatch/create, in-radius, min-one-of and random-float, which
// every NetLogo release since 5.0 accepts. See docs/netlogo_dialect.md.

#include <cctype>
#include <set>
#include <sstream>
#include <type_traits>
#include <variant>

#include "ecoloom/compiler.hpp"

namespace ecoloom {
namespace {

std::string slug(std::string_view id) {
  std::string s(id);
  for (char& ch : s) {
    auto u = static_cast<unsigned char>(ch);
    ch = std::isalnum(u) ? static_cast<char>(std::tolower(u)) : '-';
  }
  return s;
}

std::string num(double v) { return format_number(v); }

class Emitter {
 public:
  Emitter(const SimProgram& p, const EngineConfig& cfg) : p_(p), cfg_(cfg) {
    // Distinct ids can share a slug ("Wolf!" and "wolf?"); breeds and pools
    // share one namespace of global names.
    std::set<std::string> taken;
    auto unique = [&](std::string_view id) {
      std::string base = slug(id);
      std::string name = base;
      for (int n = 2; !taken.insert(name).second; ++n) name = base + "-" + std::to_string(n);
      return name;
    };
    for (const auto& b : p_.breeds) breed_slugs_.push_back(unique(b.component_id));
    for (const auto& pl : p_.pools) pool_slugs_.push_back(unique(pl.component_id));
  }

  std::string run() {
    header();
    startup();
    setup();
    go();
    for (const auto& m : p_.methods) method(m);
    return out_.str();
  }

 private:
  std::string agents(std::size_t breed) const {
    return breed_slugs_[breed] + "-agents";
  }
  std::string agent(std::size_t breed) const {
    return breed_slugs_[breed] + "-agent";
  }
  std::string pool(std::size_t index) const {
    return "pool-" + pool_slugs_[index];
  }
  std::string param(const std::string& owner, std::string_view name) const {
    return owner + "-" + std::string(name);
  }

  void header() {
    std::string name = p_.model_name;
    for (char& ch : name) {
      if (ch == '\n' || ch == '\r') ch = ' ';
    }
    out_ << "; generated by ecoloom from model \"" << name << "\"\n";
    for (std::size_t b = 0; b < p_.breeds.size(); ++b) {
      out_ << "breed [ " << agents(b) << " " << agent(b) << " ]\n";
    }
    out_ << "turtles-own [ age carbon-biomass ]\n";
    out_ << "globals [\n";
    out_ << "  seconds-per-tick rate-scale meters-per-cell interaction-radius\n";
    out_ << "  wiggle-degrees replenish-fraction max-agents\n";
    for (std::size_t b = 0; b < p_.breeds.size(); ++b) {
      const auto s = breed_slugs_[b];
      out_ << "  " << param(s, "initial-biomass") << " " << param(s, "starting-population") << " "
           << param(s, "boost") << " " << param(s, "next-boost") << "\n";
    }
    for (std::size_t i = 0; i < p_.pools.size(); ++i) out_ << "  " << pool(i) << "\n";
    for (const auto& m : p_.methods) {
      out_ << " ";
      for (const auto& name : arg_names(m)) out_ << " " << param(m.procedure, name);
      if (m.kind == MethodKind::Produce) out_ << " " << param(m.procedure, "accumulator");
      out_ << "\n";
    }
    out_ << "]\n\n";
  }

  static std::vector<std::string_view> arg_names(const MethodDef& m) {
    switch (m.kind) {
      case MethodKind::Lifespan: return {"limit"};
      case MethodKind::MinimumPopulation: return {"minimum"};
      case MethodKind::Biomass: return {"photosynthesis-rate", "respiratory-rate"};
      case MethodKind::Reproduction: return {"maturity", "interval", "offspring-count"};
      case MethodKind::Movement: return {"direction", "velocity"};
      case MethodKind::Consume: return {"probability", "rate", "assimilation-efficiency"};
      case MethodKind::Destroy: return {"probability", "rate"};
      case MethodKind::Affect: return {"probability", "growth-rate"};
      case MethodKind::Produce: return {"production-rate"};
      case MethodKind::AbioticReplenish: return {"minimum-amount"};
    }
    return {};
  }

  static std::vector<double> arg_values(const MethodDef& m) {
    return std::visit(
        [](const auto& a) -> std::vector<double> {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, LifespanArgs>) return {a.limit};
          if constexpr (std::is_same_v<T, MinimumPopulationArgs>) return {a.minimum};
          if constexpr (std::is_same_v<T, BiomassArgs>)
            return {a.photosynthesis_rate, a.respiratory_rate};
          if constexpr (std::is_same_v<T, ReproductionArgs>)
            return {a.maturity, a.interval, a.offspring_count};
          if constexpr (std::is_same_v<T, MovementArgs>) return {a.direction, a.velocity};
          if constexpr (std::is_same_v<T, ConsumeArgs>)
            return {a.probability, a.rate, a.assimilation_efficiency};
          if constexpr (std::is_same_v<T, DestroyArgs>) return {a.probability, a.rate};
          if constexpr (std::is_same_v<T, AffectArgs>) return {a.probability, a.growth_rate};
          if constexpr (std::is_same_v<T, ProduceArgs>) return {a.production_rate};
          if constexpr (std::is_same_v<T, ReplenishArgs>) return {a.minimum_amount};
        },
        m.args);
  }

  void startup() {
    out_ << "to startup\n";
    out_ << "  set seconds-per-tick " << num(cfg_.seconds_per_tick) << "\n";
    out_ << "  set rate-scale " << num(cfg_.rate_scale) << "\n";
    out_ << "  set meters-per-cell " << num(cfg_.meters_per_cell) << "\n";
    out_ << "  set interaction-radius " << num(cfg_.interaction_radius) << "\n";
    out_ << "  set wiggle-degrees " << num(cfg_.wiggle_degrees) << "\n";
    out_ << "  set replenish-fraction " << num(cfg_.replenish_fraction) << "\n";
    out_ << "  set max-agents " << cfg_.max_agents << "\n";
    for (std::size_t i = 0; i < p_.breeds.size(); ++i) {
      const auto& b = p_.breeds[i];
      const auto& s = breed_slugs_[i];
      out_ << "  set " << param(s, "initial-biomass") << " " << num(b.initial_biomass) << "\n";
      out_ << "  set " << param(s, "starting-population") << " " << num(b.starting_population)
           << "\n";
      out_ << "  set " << param(s, "boost") << " 1\n";
      out_ << "  set " << param(s, "next-boost") << " 1\n";
    }
    for (const auto& m : p_.methods) {
      auto names = arg_names(m);
      auto values = arg_values(m);
      for (std::size_t i = 0; i < names.size(); ++i) {
        out_ << "  set " << param(m.procedure, names[i]) << " " << num(values[i]) << "\n";
      }
    }
    out_ << "end\n\n";
  }

  void setup() {
    out_ << "to setup\n";
    out_ << "  clear-all\n";
    out_ << "  resize-world 0 " << cfg_.grid_size - 1 << " 0 " << cfg_.grid_size - 1 << "\n";
    for (std::size_t b = 0; b < p_.breeds.size(); ++b) {
      const auto s = breed_slugs_[b];
      out_ << "  create-" << agents(b) << " " << param(s, "starting-population")
           << " [ init-agent " << param(s, "initial-biomass") << " ]\n";
    }
    for (std::size_t i = 0; i < p_.pools.size(); ++i) {
      out_ << "  set " << pool(i) << " " << num(p_.pools[i].amount) << "\n";
    }
    out_ << "  reset-ticks\n";
    out_ << "end\n\n";
    out_ << "to init-agent [ biomass ]\n";
    out_ << "  setxy random-xcor random-ycor\n";
    out_ << "  set heading random-float 360\n";
    out_ << "  set age 0\n";
    out_ << "  set carbon-biomass biomass\n";
    out_ << "end\n\n";
    out_ << "to-report room\n";
    out_ << "  report max (list 0 (max-agents - count turtles))\n";
    out_ << "end\n\n";
  }

  void go() {
    out_ << "to go\n";
    out_ << "  ask turtles [ set age age + 1 ]\n";
    for (const auto& s : breed_slugs_) {
      out_ << "  set " << param(s, "boost") << " " << param(s, "next-boost") << "\n";
      out_ << "  set " << param(s, "next-boost") << " 1\n";
    }
    for (const auto& m : p_.methods) out_ << "  " << m.procedure << "\n";
    out_ << "  tick\n";
    out_ << "end\n";
  }

  // Breed or pool the slot refers to, for relationship bodies.
  bool is_breed(const Slot& s) const { return s.type == SlotType::Breed; }

  void method(const MethodDef& m) {
    const std::string& pr = m.procedure;
    auto P = [&](std::string_view n) { return param(pr, n); };
    const auto& sub = m.subject;
    const auto& tgt = m.target;
    out_ << "\nto " << pr << "\n";
    switch (m.kind) {
      case MethodKind::Lifespan:
        out_ << "  ask " << agents(sub.index) << " [ if age >= " << P("limit") << " [ die ] ]\n";
        break;
      case MethodKind::MinimumPopulation: {
        const auto s = breed_slugs_[sub.index];
        out_ << "  let deficit " << P("minimum") << " - count " << agents(sub.index) << "\n";
        out_ << "  if deficit > 0 [\n";
        out_ << "    let n min (list room (floor (ceiling (replenish-fraction * deficit) * "
             << param(s, "boost") << ")))\n";
        out_ << "    create-" << agents(sub.index) << " n [ init-agent "
             << param(s, "initial-biomass") << " ]\n";
        out_ << "  ]\n";
        break;
      }
      case MethodKind::Biomass:
        out_ << "  ask " << agents(sub.index) << " [\n";
        out_ << "    set carbon-biomass carbon-biomass + (" << P("photosynthesis-rate") << " - "
             << P("respiratory-rate") << ") * seconds-per-tick * rate-scale\n";
        out_ << "    if carbon-biomass <= 0 [ die ]\n";
        out_ << "  ]\n";
        break;
      case MethodKind::Reproduction: {
        const auto s = breed_slugs_[sub.index];
        out_ << "  ask " << agents(sub.index) << " [\n";
        out_ << "    if age > 0 and age >= " << P("maturity") << " and (age - " << P("maturity")
             << ") mod " << P("interval") << " = 0 [\n";
        out_ << "      hatch-" << agents(sub.index) << " min (list room (floor ("
             << P("offspring-count") << " * " << param(s, "boost")
             << "))) [ set age 0 set carbon-biomass " << param(s, "initial-biomass") << " ]\n";
        out_ << "    ]\n";
        out_ << "  ]\n";
        break;
      }
      case MethodKind::Movement:
        out_ << "  ask " << agents(sub.index) << " [\n";
        out_ << "    set heading " << P("direction")
             << " + (random-float (2 * wiggle-degrees)) - wiggle-degrees\n";
        out_ << "    fd min (list (" << P("velocity")
             << " * seconds-per-tick / meters-per-cell) world-width)\n";
        out_ << "  ]\n";
        break;
      case MethodKind::Consume:
        out_ << "  ask " << agents(sub.index) << " [\n";
        out_ << "    let prey min-one-of (other " << agents(tgt.index)
             << " in-radius interaction-radius) [ distance myself ]\n";
        out_ << "    if prey != nobody [\n";
        out_ << "      if random-float 1 < " << P("probability") << " [\n";
        out_ << "        let amount " << P("rate") << " * [ carbon-biomass ] of prey\n";
        out_ << "        ask prey [ set carbon-biomass carbon-biomass - amount ]\n";
        out_ << "        set carbon-biomass carbon-biomass + amount * "
             << P("assimilation-efficiency") << "\n";
        out_ << "        if [ carbon-biomass ] of prey <= 0 [ ask prey [ die ] ]\n";
        out_ << "      ]\n";
        out_ << "    ]\n";
        out_ << "  ]\n";
        break;
      case MethodKind::Destroy:
        out_ << "  ask " << agents(sub.index) << " [\n";
        if (is_breed(tgt)) {
          out_ << "    let victim min-one-of (other " << agents(tgt.index)
               << " in-radius interaction-radius) [ distance myself ]\n";
          out_ << "    if victim != nobody [\n";
          out_ << "      if random-float 1 < " << P("probability") << " [\n";
          out_ << "        ask victim [\n";
          out_ << "          set carbon-biomass carbon-biomass - " << P("rate")
               << " * carbon-biomass\n";
          out_ << "          if " << P("rate") << " >= 1 or carbon-biomass <= 0 [ die ]\n";
          out_ << "        ]\n";
          out_ << "      ]\n";
          out_ << "    ]\n";
        } else {
          out_ << "    if random-float 1 < " << P("probability") << " [\n";
          out_ << "      set " << pool(tgt.index) << " " << pool(tgt.index) << " - " << P("rate")
               << " * " << pool(tgt.index) << "\n";
          out_ << "    ]\n";
        }
        out_ << "  ]\n";
        break;
      case MethodKind::Affect: {
        if (is_breed(sub)) {
          out_ << "  let actors count " << agents(sub.index) << "\n";
          out_ << "  let hits count " << agents(sub.index) << " with [ random-float 1 < "
               << P("probability") << " ]\n";
        } else {
          out_ << "  let actors ifelse-value (" << pool(sub.index) << " > 0) [ 1 ] [ 0 ]\n";
          out_ << "  let hits ifelse-value (actors > 0 and random-float 1 < " << P("probability")
               << ") [ 1 ] [ 0 ]\n";
        }
        out_ << "  if actors > 0 [\n";
        out_ << "    let multiplier 1 + " << P("growth-rate") << " * hits / actors\n";
        if (is_breed(tgt)) {
          const auto s = param(breed_slugs_[tgt.index], "next-boost");
          out_ << "    set " << s << " " << s << " * multiplier\n";
        } else {
          out_ << "    set " << pool(tgt.index) << " " << pool(tgt.index) << " * multiplier\n";
        }
        out_ << "  ]\n";
        break;
      }
      case MethodKind::Produce:
        out_ << "  set " << P("accumulator") << " " << P("accumulator") << " + count "
             << agents(sub.index) << " * " << P("production-rate")
             << " * seconds-per-tick * rate-scale\n";
        if (is_breed(tgt)) {
          const auto& breed = p_.breeds[tgt.index];
          const auto& s = breed_slugs_[tgt.index];
          const auto unit = num(breed.body_mass > 0 ? breed.body_mass : breed.initial_biomass);
          out_ << "  let n floor (" << P("accumulator") << " / " << unit << ")\n";
          out_ << "  set " << P("accumulator") << " " << P("accumulator") << " - n * " << unit
               << "\n";
          out_ << "  create-" << agents(tgt.index) << " min (list room n) [ init-agent "
               << param(s, "initial-biomass") << " ]\n";
        } else {
          out_ << "  set " << pool(tgt.index) << " " << pool(tgt.index) << " + " << P("accumulator")
               << "\n";
          out_ << "  set " << P("accumulator") << " 0\n";
        }
        break;
      case MethodKind::AbioticReplenish:
        out_ << "  if " << pool(sub.index) << " < " << P("minimum-amount") << " [\n";
        out_ << "    set " << pool(sub.index) << " " << pool(sub.index)
             << " + replenish-fraction * (" << P("minimum-amount") << " - " << pool(sub.index)
             << ")\n";
        out_ << "  ]\n";
        break;
    }
    out_ << "end\n";
  }

  const SimProgram& p_;
  const EngineConfig& cfg_;
  std::vector<std::string> breed_slugs_;
  std::vector<std::string> pool_slugs_;
  std::ostringstream out_;
};

}  // namespace

std::string emit_netlogo(const SimProgram& p, const EngineConfig& cfg) {
  return Emitter(p, cfg).run();
}

}  // namespace ecoloom
