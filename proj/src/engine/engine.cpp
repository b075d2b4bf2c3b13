#include "ecoloom/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ecoloom/errors.hpp"
#include "ecoloom/kernels.hpp"

namespace ecoloom {
namespace {

// Guards ceil/floor against products like 0.1 * 30 = 3.0000000000000004.
constexpr double kCountEpsilon = 1e-9;

class Machine {
 public:
  Machine(WorldState& w, const SimProgram& p, ExecutionPolicy policy)
      : w_(w), p_(p), policy_(policy), size_(w.config.grid_size) {}

  void execute(std::size_t index) {
    const MethodDef& m = p_.methods[index];
    std::visit([&](const auto& args) { apply(m, index, args); }, m.args);
  }

 private:
  std::vector<std::uint32_t> live_members(std::size_t breed) const {
    std::vector<std::uint32_t> out;
    out.reserve(static_cast<std::size_t>(w_.breeds[breed].live));
    for (std::size_t i = 0; i < w_.agents.size(); ++i) {
      const Agent& a = w_.agents[i];
      if (a.alive && a.breed == breed) out.push_back(static_cast<std::uint32_t>(i));
    }
    return out;
  }

  void kill(Agent& a) {
    if (!a.alive) return;
    a.alive = false;
    --w_.breeds[a.breed].live;
    --w_.live_agents;
  }

  bool spawn(std::size_t breed, double x, double y, double heading) {
    if (w_.live_agents >= w_.config.max_agents) return false;
    Agent a;
    a.id = w_.next_agent_id++;
    a.breed = static_cast<std::uint32_t>(breed);
    a.x = x;
    a.y = y;
    a.heading = heading;
    a.age = 0;
    a.carbon_biomass = p_.breeds[breed].initial_biomass;
    w_.agents.push_back(a);
    ++w_.breeds[breed].live;
    ++w_.live_agents;
    return true;
  }

  bool spawn_random(std::size_t breed) {
    if (w_.live_agents >= w_.config.max_agents) return false;
    double x = w_.rng.uniform() * size_;
    double y = w_.rng.uniform() * size_;
    double h = w_.rng.uniform() * 360.0;
    return spawn(breed, kernels::wrap(x, size_), kernels::wrap(y, size_), h);
  }

  static std::int64_t take_whole(double requested, double& carry) {
    double total = requested + carry;
    double whole = std::floor(total + kCountEpsilon);
    carry = std::max(0.0, total - whole);
    return static_cast<std::int64_t>(whole);
  }

  double per_tick(double rate_per_second) const {
    return rate_per_second * w_.config.seconds_per_tick * w_.config.rate_scale;
  }

  void apply(const MethodDef& m, std::size_t, const LifespanArgs& a) {
    for (std::uint32_t i : live_members(m.subject.index)) {
      Agent& ag = w_.agents[i];
      if (static_cast<double>(ag.age) >= a.limit) kill(ag);
    }
  }

  void apply(const MethodDef& m, std::size_t, const MinimumPopulationArgs& a) {
    auto& bs = w_.breeds[m.subject.index];
    double live = static_cast<double>(bs.live);
    if (live >= a.minimum) return;
    double base = std::ceil(w_.config.replenish_fraction * (a.minimum - live) - kCountEpsilon);
    std::int64_t n = take_whole(std::max(0.0, base) * bs.boost, bs.replenish_carry);
    for (std::int64_t k = 0; k < n; ++k) {
      if (!spawn_random(m.subject.index)) break;
    }
  }

  void apply(const MethodDef& m, std::size_t, const BiomassArgs& a) {
    double delta = per_tick(a.photosynthesis_rate - a.respiratory_rate);
    auto members = live_members(m.subject.index);
    std::int64_t deaths = policy_ == ExecutionPolicy::Parallel
                              ? kernels::parallel::apply_biomass_delta(w_.agents, members, delta)
                              : kernels::serial::apply_biomass_delta(w_.agents, members, delta);
    w_.breeds[m.subject.index].live -= deaths;
    w_.live_agents -= deaths;
  }

  void apply(const MethodDef& m, std::size_t, const ReproductionArgs& a) {
    const std::size_t breed = m.subject.index;
    auto& bs = w_.breeds[breed];
    const auto maturity = static_cast<std::int64_t>(std::llround(a.maturity));
    const auto interval = static_cast<std::int64_t>(std::llround(a.interval));
    for (std::uint32_t i : live_members(breed)) {
      const Agent parent = w_.agents[i];
      if (parent.age <= 0 || parent.age < maturity) continue;
      if (interval > 0 && (parent.age - maturity) % interval != 0) continue;
      std::int64_t n = take_whole(a.offspring_count * bs.boost, bs.reproduction_carry);
      for (std::int64_t k = 0; k < n; ++k) {
        if (!spawn(breed, parent.x, parent.y, parent.heading)) return;
      }
    }
  }

  void apply(const MethodDef& m, std::size_t, const MovementArgs& a) {
    const double wiggle = w_.config.wiggle_degrees;
    const double step = std::min(
        a.velocity * w_.config.seconds_per_tick / w_.config.meters_per_cell, size_);
    for (std::uint32_t i : live_members(m.subject.index)) {
      Agent& ag = w_.agents[i];
      double h = a.direction + (2.0 * w_.rng.uniform() - 1.0) * wiggle;
      h = std::fmod(h, 360.0);
      if (h < 0) h += 360.0;
      ag.heading = h;
      double rad = h * std::numbers::pi / 180.0;
      ag.x = kernels::wrap(ag.x + step * std::sin(rad), size_);
      ag.y = kernels::wrap(ag.y + step * std::cos(rad), size_);
    }
  }

  kernels::CandidateLists candidates(std::span<const std::uint32_t> sources,
                                     std::span<const std::uint32_t> targets) const {
    const double r = w_.config.interaction_radius;
    return policy_ == ExecutionPolicy::Parallel
               ? kernels::parallel::find_candidates(w_.agents, sources, targets, r, size_)
               : kernels::serial::find_candidates(w_.agents, sources, targets, r, size_);
  }

  // Nearest still-living candidate of source s, or nullptr.
  Agent* first_alive(const kernels::CandidateLists& lists, std::size_t s) {
    for (std::uint32_t t : lists.of(s)) {
      if (w_.agents[t].alive) return &w_.agents[t];
    }
    return nullptr;
  }

  void apply(const MethodDef& m, std::size_t, const ConsumeArgs& a) {
    auto sources = live_members(m.subject.index);
    auto targets = live_members(m.target.index);
    auto lists = candidates(sources, targets);
    for (std::size_t s = 0; s < sources.size(); ++s) {
      Agent& src = w_.agents[sources[s]];
      if (!src.alive) continue;
      Agent* prey = first_alive(lists, s);
      if (!prey) continue;
      if (!(w_.rng.uniform() < a.probability)) continue;
      double taken = a.rate * prey->carbon_biomass;
      prey->carbon_biomass -= taken;
      src.carbon_biomass += taken * a.assimilation_efficiency;
      if (prey->carbon_biomass <= 0) kill(*prey);
    }
  }

  void apply(const MethodDef& m, std::size_t, const DestroyArgs& a) {
    auto sources = live_members(m.subject.index);
    if (m.target.type == SlotType::Pool) {
      double& pool = w_.pools[m.target.index];
      for (std::size_t s = 0; s < sources.size(); ++s) {
        if (!w_.agents[sources[s]].alive) continue;
        if (w_.rng.uniform() < a.probability) pool = std::max(0.0, pool - a.rate * pool);
      }
      return;
    }
    auto targets = live_members(m.target.index);
    auto lists = candidates(sources, targets);
    for (std::size_t s = 0; s < sources.size(); ++s) {
      if (!w_.agents[sources[s]].alive) continue;
      Agent* victim = first_alive(lists, s);
      if (!victim) continue;
      if (!(w_.rng.uniform() < a.probability)) continue;
      victim->carbon_biomass -= a.rate * victim->carbon_biomass;
      if (a.rate >= 1.0 || victim->carbon_biomass <= 0) kill(*victim);
    }
  }

  void apply(const MethodDef& m, std::size_t, const AffectArgs& a) {
    std::int64_t actors = 0;
    std::int64_t hits = 0;
    if (m.subject.type == SlotType::Breed) {
      actors = static_cast<std::int64_t>(live_members(m.subject.index).size());
      for (std::int64_t k = 0; k < actors; ++k) {
        if (w_.rng.uniform() < a.probability) ++hits;
      }
    } else if (w_.pools[m.subject.index] > 0) {
      actors = 1;
      if (w_.rng.uniform() < a.probability) hits = 1;
    }
    if (actors == 0) return;
    double multiplier =
        1.0 + a.growth_rate * static_cast<double>(hits) / static_cast<double>(actors);
    multiplier = std::max(0.0, multiplier);
    if (m.target.type == SlotType::Breed) {
      w_.breeds[m.target.index].next_boost *= multiplier;
    } else {
      w_.pools[m.target.index] *= multiplier;
    }
  }

  void apply(const MethodDef& m, std::size_t index, const ProduceArgs& a) {
    double& acc = w_.produce_accumulators[index];
    acc += static_cast<double>(w_.breeds[m.subject.index].live) * per_tick(a.production_rate);
    if (m.target.type == SlotType::Pool) {
      w_.pools[m.target.index] += acc;
      acc = 0.0;
      return;
    }
    const BreedDef& breed = p_.breeds[m.target.index];
    const double unit = breed.body_mass > 0 ? breed.body_mass : breed.initial_biomass;
    const auto n = static_cast<std::int64_t>(std::floor(acc / unit));
    acc = std::max(0.0, acc - static_cast<double>(n) * unit);
    for (std::int64_t k = 0; k < n; ++k) {
      if (!spawn_random(m.target.index)) break;
    }
  }

  void apply(const MethodDef& m, std::size_t, const ReplenishArgs& a) {
    double& pool = w_.pools[m.subject.index];
    if (pool < a.minimum_amount) pool += w_.config.replenish_fraction * (a.minimum_amount - pool);
  }

  WorldState& w_;
  const SimProgram& p_;
  ExecutionPolicy policy_;
  double size_;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

WorldState init_world(const SimProgram& p, const EngineConfig& cfg) {
  cfg.validate();
  double total = 0;
  for (const auto& b : p.breeds) total += b.starting_population;
  if (total > static_cast<double>(cfg.max_agents)) {
    throw CapacityError("starting populations total " + format_number(total) +
                        " agents, above the cap of " + std::to_string(cfg.max_agents));
  }
  WorldState w;
  w.config = cfg;
  w.rng = Rng(cfg.rng_seed);
  w.breeds.resize(p.breeds.size());
  w.produce_accumulators.assign(p.methods.size(), 0.0);
  for (const auto& pool : p.pools) w.pools.push_back(pool.amount);
  const double size = cfg.grid_size;
  w.agents.reserve(static_cast<std::size_t>(total));
  for (std::size_t b = 0; b < p.breeds.size(); ++b) {
    const auto count = static_cast<std::int64_t>(p.breeds[b].starting_population);
    for (std::int64_t k = 0; k < count; ++k) {
      Agent a;
      a.id = w.next_agent_id++;
      a.breed = static_cast<std::uint32_t>(b);
      a.x = kernels::wrap(w.rng.uniform() * size, size);
      a.y = kernels::wrap(w.rng.uniform() * size, size);
      a.heading = w.rng.uniform() * 360.0;
      a.carbon_biomass = p.breeds[b].initial_biomass;
      w.agents.push_back(a);
    }
    w.breeds[b].live = count;
    w.live_agents += count;
  }
  return w;
}

PopulationRecord snapshot(const WorldState& w, const SimProgram& p) {
  PopulationRecord r;
  r.tick = w.tick;
  r.counts.reserve(p.components.size());
  for (const auto& c : p.components) {
    r.counts.push_back(c.slot.type == SlotType::Breed
                           ? static_cast<double>(w.breeds[c.slot.index].live)
                           : w.pools[c.slot.index]);
  }
  return r;
}

void execute_method(WorldState& w, const SimProgram& p, std::size_t method_index,
                    ExecutionPolicy policy) {
  Machine(w, p, policy).execute(method_index);
}

void remove_dead(WorldState& w) {
  std::erase_if(w.agents, [](const Agent& a) { return !a.alive; });
}

PopulationRecord tick(WorldState& w, const SimProgram& p, ExecutionPolicy policy) {
  for (auto& a : w.agents) {
    if (a.alive) ++a.age;
  }
  for (auto& b : w.breeds) {
    b.boost = b.next_boost;
    b.next_boost = 1.0;
  }
  Machine machine(w, p, policy);
  for (std::size_t i = 0; i < p.methods.size(); ++i) machine.execute(i);
  remove_dead(w);
  ++w.tick;
  return snapshot(w, p);
}

TimeSeries run(const SimProgram& p, const EngineConfig& cfg, const RecordSink& sink,
               ExecutionPolicy policy) {
  TimeSeries ts;
  for (const auto& c : p.components) {
    ts.component_ids.push_back(c.id);
    ts.labels.push_back(c.label);
  }
  WorldState w = init_world(p, cfg);
  ts.records.push_back(snapshot(w, p));
  if (sink && !sink(ts.records.back())) return ts;
  while (w.tick < cfg.max_ticks) {
    ts.records.push_back(tick(w, p, policy));
    if (sink && !sink(ts.records.back())) break;
  }
  return ts;
}

std::string csv_header(const SimProgram& p) {
  std::string out = "Month";
  for (const auto& c : p.components) out += "," + csv_field(c.label);
  return out + "\n";
}

std::string csv_row(const PopulationRecord& r) {
  std::string out = std::to_string(r.tick);
  for (double v : r.counts) out += "," + std::to_string(std::llround(v));
  return out + "\n";
}

std::string TimeSeries::to_csv() const {
  std::string out = "Month";
  for (const auto& l : labels) out += "," + csv_field(l);
  out += "\n";
  for (const auto& r : records) out += csv_row(r);
  return out;
}

}  // namespace ecoloom
