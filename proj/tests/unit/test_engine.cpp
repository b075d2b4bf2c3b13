#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ecoloom/compiler.hpp"
#include "ecoloom/defaults.hpp"
#include "ecoloom/validate.hpp"
#include "ecoloom/engine.hpp"
#include "ecoloom/ensemble.hpp"
#include "ecoloom/errors.hpp"
#include "ecoloom/kernels.hpp"
#include "support/random_worlds.hpp"
#include "support/running_example.hpp"

using namespace ecoloom;
using ecoloom::testing::random_world;
using ecoloom::testing::running_example;

namespace {

constexpr double kPerTick = 1.0 / 2592000.0;  // rate_scale making kg/s read as kg/tick

Component make_biotic(std::string id, BioticParams b) {
  Component c;
  c.id = id;
  c.display_name = id;
  c.params = b;
  return c;
}

Component make_abiotic(std::string id, AbioticParams a) {
  Component c;
  c.id = id;
  c.display_name = id;
  c.kind = ComponentKind::Abiotic;
  c.params = a;
  return c;
}

Relationship make_rel(std::string id, RelationshipKind k, std::string s, std::string t,
                      RelationshipParams p = {}) {
  return Relationship{std::move(id), k, std::move(s), std::move(t), p};
}

EngineConfig quiet_config(std::uint64_t seed = 1) {
  EngineConfig cfg;
  cfg.rng_seed = seed;
  cfg.wiggle_degrees = 0;
  cfg.rate_scale = kPerTick;
  return cfg;
}

std::vector<const Agent*> live_of(const WorldState& w, std::uint32_t breed) {
  std::vector<const Agent*> out;
  for (const auto& a : w.agents) {
    if (a.alive && a.breed == breed) out.push_back(&a);
  }
  return out;
}

void place(WorldState& w, std::size_t i, double x, double y) {
  w.agents[i].x = x;
  w.agents[i].y = y;
}

}  // namespace

// ---- init_world -------------------------------------------------------------

TEST_CASE("running example starts with 200 wolves, 1200 sheep, 1000 grass") {
  SimProgram p = compile(running_example());
  WorldState w = init_world(p, EngineConfig{});
  PopulationRecord r = snapshot(w, p);
  CHECK(r.tick == 0);
  CHECK(r.counts == std::vector<double>{200, 1200, 1000});
  CHECK(w.agents.size() == 2400);
  CHECK(w.agents[0].carbon_biomass == 30);
  CHECK(w.agents[250].carbon_biomass == 19.66);
  for (const auto& a : w.agents) {
    CHECK(a.age == 0);
    CHECK(a.x >= 0);
    CHECK(a.x < 32);
    CHECK(a.y >= 0);
    CHECK(a.y < 32);
  }
}

TEST_CASE("same seed gives identical initial worlds") {
  SimProgram p = compile(running_example());
  EngineConfig cfg;
  cfg.rng_seed = 99;
  CHECK(init_world(p, cfg) == init_world(p, cfg));
  EngineConfig other = cfg;
  other.rng_seed = 100;
  CHECK(init_world(p, cfg).agents != init_world(p, other).agents);
}

TEST_CASE("zero-component program and capacity errors") {
  SimProgram empty = compile(ConceptualModel{});
  WorldState w = init_world(empty, EngineConfig{});
  CHECK(w.agents.empty());
  PopulationRecord r = tick(w, empty);
  CHECK(r.counts.empty());
  CHECK(r.tick == 1);

  EngineConfig small;
  small.max_agents = 2399;
  CHECK_THROWS_AS(init_world(compile(running_example()), small), CapacityError);
  small.grid_size = 0;
  CHECK_THROWS_AS(init_world(empty, small), ConfigError);
}

TEST_CASE("carbon biomass parameter overrides body mass at birth") {
  ConceptualModel m;
  m.components.push_back(make_biotic("a", {.carbon_biomass = 4, .starting_population = 1,
                                           .body_mass = 9}));
  m.components.push_back(make_biotic("b", {.starting_population = 1, .body_mass = 9}));
  WorldState w = init_world(compile(m), EngineConfig{});
  CHECK(w.agents[0].carbon_biomass == 4);
  CHECK(w.agents[1].carbon_biomass == 9);
}

// ---- consumption arithmetic -------------------------------------------------

TEST_CASE("co-located wolf eats sheep: 30 -> 33.932 and 19.66 -> 15.728") {
  ConceptualModel m;
  m.components.push_back(make_biotic("wolf", {.starting_population = 1, .body_mass = 30}));
  m.components.push_back(make_biotic("sheep", {.starting_population = 1, .body_mass = 19.66}));
  m.relationships.push_back(make_rel("eat", RelationshipKind::Consumes, "wolf", "sheep",
                                     {.interaction_probability = 1.0, .consumption_rate = 0.2}));
  SimProgram p = compile(m);
  WorldState w = init_world(p, EngineConfig{});
  place(w, 1, w.agents[0].x, w.agents[0].y);
  tick(w, p);
  CHECK(std::fabs(w.agents[0].carbon_biomass - 33.932) <= 1e-9);
  CHECK(std::fabs(w.agents[1].carbon_biomass - 15.728) <= 1e-9);
}

// ---- movement ---------------------------------------------------------------

TEST_CASE("movement") {
  SUBCASE("velocity 0 leaves positions unchanged") {
    ConceptualModel m;
    m.components.push_back(make_biotic("a", {.move_direction = 90, .move_velocity = 0,
                                             .starting_population = 5}));
    SimProgram p = compile(m);
    WorldState w = init_world(p, EngineConfig{});
    auto before = w.agents;
    for (int i = 0; i < 3; ++i) tick(w, p);
    for (std::size_t i = 0; i < before.size(); ++i) {
      CHECK(w.agents[i].x == before[i].x);
      CHECK(w.agents[i].y == before[i].y);
    }
  }
  SUBCASE("one cell east from x=31.5 wraps to 0.5") {
    ConceptualModel m;
    m.components.push_back(make_biotic("a", {.move_direction = 90, .move_velocity = 1,
                                             .starting_population = 1}));
    SimProgram p = compile(m);
    EngineConfig cfg = quiet_config();
    cfg.meters_per_cell = cfg.seconds_per_tick;  // velocity 1 m/s = 1 cell per tick
    WorldState w = init_world(p, cfg);
    place(w, 0, 31.5, 10.0);
    tick(w, p);
    CHECK(w.agents[0].x == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w.agents[0].y == doctest::Approx(10.0).epsilon(1e-12));
  }
  SUBCASE("negative direction wraps the other way") {
    ConceptualModel m;
    m.components.push_back(make_biotic("a", {.move_direction = 180, .move_velocity = 2,
                                             .starting_population = 1}));
    SimProgram p = compile(m);
    EngineConfig cfg = quiet_config();
    cfg.meters_per_cell = cfg.seconds_per_tick;
    WorldState w = init_world(p, cfg);
    place(w, 0, 3.0, 1.0);
    tick(w, p);
    CHECK(w.agents[0].y == doctest::Approx(31.0).epsilon(1e-12));
  }
  SUBCASE("step is capped at the grid size") {
    ConceptualModel m;
    m.components.push_back(make_biotic("a", {.move_direction = 0, .move_velocity = 1000,
                                             .starting_population = 1}));
    SimProgram p = compile(m);
    WorldState w = init_world(p, quiet_config());
    place(w, 0, 4.25, 7.5);
    tick(w, p);
    // a full lap of the torus returns to the start
    CHECK(w.agents[0].y == doctest::Approx(7.5).epsilon(1e-9));
  }
  SUBCASE("fixed seed displacement is reproducible") {
    ConceptualModel m;
    m.components.push_back(make_biotic("a", {.move_direction = 30, .move_velocity = 1e-6,
                                             .starting_population = 50}));
    SimProgram p = compile(m);
    EngineConfig cfg;
    cfg.rng_seed = 3;
    WorldState a = init_world(p, cfg);
    WorldState b = init_world(p, cfg);
    for (int i = 0; i < 10; ++i) {
      tick(a, p);
      tick(b, p);
    }
    CHECK(a == b);
    for (const auto& ag : a.agents) {
      double off = std::fabs(std::remainder(ag.heading - 30.0, 360.0));
      CHECK(off <= 45.0 + 1e-9);
    }
  }
}

// ---- biomass ----------------------------------------------------------------

TEST_CASE("biomass") {
  SUBCASE("equal rates are a no-op") {
    ConceptualModel m;
    m.components.push_back(make_biotic("a", {.respiratory_rate = 0.3, .photosynthesis_rate = 0.3,
                                             .starting_population = 2}));
    SimProgram p = compile(m);
    CHECK(p.methods.empty());
    WorldState w = init_world(p, quiet_config());
    tick(w, p);
    CHECK(w.agents[0].carbon_biomass == 1.0);
  }
  SUBCASE("net rate for n ticks matches the closed form") {
    const double r = 3.7e-8;  // kg/s
    ConceptualModel m;
    m.components.push_back(
        make_biotic("a", {.photosynthesis_rate = r, .starting_population = 1, .body_mass = 2}));
    SimProgram p = compile(m);
    EngineConfig cfg;  // rate_scale 1
    WorldState w = init_world(p, cfg);
    for (int n = 1; n <= 50; ++n) {
      tick(w, p);
      CHECK(std::fabs(w.agents[0].carbon_biomass - (2 + n * r * cfg.seconds_per_tick)) <= 1e-9);
    }
  }
  SUBCASE("respiration above photosynthesis eventually kills") {
    ConceptualModel m;
    m.components.push_back(make_biotic("a", {.respiratory_rate = 0.3, .photosynthesis_rate = 0.1,
                                             .starting_population = 3, .body_mass = 1}));
    SimProgram p = compile(m);
    WorldState w = init_world(p, quiet_config());
    PopulationRecord r;
    for (int i = 0; i < 4; ++i) r = tick(w, p);
    CHECK(r.counts[0] == 3);
    CHECK(w.agents[0].carbon_biomass == doctest::Approx(0.2));
    tick(w, p);  // about 0, may survive by rounding
    CHECK(tick(w, p).counts[0] == 0);
  }
}

// ---- reproduction -------------------------------------------------------------

TEST_CASE("reproduction") {
  SUBCASE("offspring count 0 never spawns") {
    SimProgram p = compile(running_example());
    CHECK(std::none_of(p.methods.begin(), p.methods.end(), [](const MethodDef& d) {
      return d.origin == "grass" && d.kind == MethodKind::Reproduction;
    }));
  }
  SUBCASE("sheep spawn one lamb at age 24, then every 12 months") {
    ConceptualModel m;
    m.components.push_back(make_biotic(
        "sheep", {.reproductive_maturity = 24, .reproductive_interval = 12,
                  .offspring_count = 1, .starting_population = 1, .body_mass = 19.66}));
    SimProgram p = compile(m);
    WorldState w = init_world(p, quiet_config());
    for (int t = 1; t <= 48; ++t) {
      auto r = tick(w, p);
      double expected = t < 24 ? 1 : t < 36 ? 2 : t < 48 ? 3 : 5;
      CHECK_MESSAGE(r.counts[0] == expected, "tick " << t);
    }
    const Agent& lamb = w.agents[1];
    CHECK(lamb.age == 48 - 24);
    CHECK(lamb.x == w.agents[0].x);
    CHECK(lamb.carbon_biomass == 19.66);
  }
  SUBCASE("population pins at the cap") {
    ConceptualModel m;
    m.components.push_back(make_biotic("r", {.reproductive_maturity = 1,
                                             .reproductive_interval = 1, .offspring_count = 3,
                                             .starting_population = 9}));
    SimProgram p = compile(m);
    EngineConfig cfg = quiet_config();
    cfg.max_agents = 20;
    WorldState w = init_world(p, cfg);
    for (int t = 0; t < 5; ++t) {
      auto r = tick(w, p);
      CHECK(r.counts[0] == 20);
      CHECK(w.live_agents <= cfg.max_agents);
    }
  }
}

// ---- lifespan ---------------------------------------------------------------

TEST_CASE("lifespan") {
  ConceptualModel m;
  m.components.push_back(make_biotic("wolf", {.lifespan = 180, .starting_population = 2}));
  m.components.push_back(make_biotic("ageless", {.lifespan = 0, .starting_population = 1}));
  SimProgram p = compile(m);
  WorldState w = init_world(p, quiet_config());
  for (int t = 1; t < 180; ++t) tick(w, p);
  CHECK(live_of(w, 0).size() == 2);
  CHECK(live_of(w, 0)[0]->age == 179);
  auto r = tick(w, p);
  CHECK(r.counts[0] == 0);
  for (int t = 0; t < 300; ++t) tick(w, p);
  CHECK(live_of(w, 1).size() == 1);
  CHECK(live_of(w, 1)[0]->age == 480);
}

// ---- minimum population -------------------------------------------------------

TEST_CASE("minimum population") {
  SUBCASE("900 of 1000 with fraction 0.25 adds 25") {
    ConceptualModel m;
    m.components.push_back(
        make_biotic("grass", {.starting_population = 900, .minimum_population = 1000}));
    SimProgram p = compile(m);
    WorldState w = init_world(p, quiet_config());
    CHECK(tick(w, p).counts[0] == 925);
  }
  SUBCASE("at or above the minimum nothing spawns") {
    ConceptualModel m;
    m.components.push_back(
        make_biotic("grass", {.starting_population = 1000, .minimum_population = 1000}));
    SimProgram p = compile(m);
    WorldState w = init_world(p, quiet_config());
    auto draws = w.rng.draws();
    CHECK(tick(w, p).counts[0] == 1000);
    CHECK(w.rng.draws() == draws);
  }
  SUBCASE("minimum 0 is a no-op method") {
    SimProgram p = compile(running_example());
    CHECK(std::any_of(p.noops.begin(), p.noops.end(), [](const NoopEntry& e) {
      return e.origin == "sheep" && e.kind == MethodKind::MinimumPopulation;
    }));
  }
  SUBCASE("spawns respect the cap") {
    ConceptualModel m;
    m.components.push_back(
        make_biotic("grass", {.starting_population = 0, .minimum_population = 1000}));
    SimProgram p = compile(m);
    EngineConfig cfg = quiet_config();
    cfg.max_agents = 100;
    cfg.replenish_fraction = 1.0;
    WorldState w = init_world(p, cfg);
    CHECK(tick(w, p).counts[0] == 100);
  }
}

// ---- consume ----------------------------------------------------------------

namespace {

ConceptualModel grazing(double probability, double rate, double efficiency, int sheep = 40,
                        int grass = 200) {
  ConceptualModel m;
  m.components.push_back(make_biotic("sheep", {.assimilation_efficiency = efficiency,
                                               .starting_population = double(sheep),
                                               .body_mass = 20}));
  m.components.push_back(
      make_biotic("grass", {.starting_population = double(grass), .body_mass = 5}));
  m.relationships.push_back(
      make_rel("eat", RelationshipKind::Consumes, "sheep", "grass",
               {.interaction_probability = probability, .consumption_rate = rate}));
  return m;
}

double total_biomass(const WorldState& w) {
  double s = 0;
  for (const auto& a : w.agents) {
    if (a.alive) s += a.carbon_biomass;
  }
  return s;
}

}  // namespace

TEST_CASE("consume") {
  SUBCASE("probability 0 never transfers") {
    SimProgram p = compile(grazing(0.0, 0.5, 1.0));
    WorldState w = init_world(p, quiet_config());
    double before = total_biomass(w);
    for (int i = 0; i < 5; ++i) tick(w, p);
    CHECK(total_biomass(w) == before);
    for (const auto& a : w.agents) CHECK(a.carbon_biomass == (a.breed == 0 ? 20 : 5));
  }
  SUBCASE("rate 0.20 removes a fifth of the target") {
    ConceptualModel m = grazing(1.0, 0.20, 1.0, 1, 1);
    SimProgram p = compile(m);
    WorldState w = init_world(p, quiet_config());
    place(w, 1, w.agents[0].x + 0.5, w.agents[0].y);
    tick(w, p);
    CHECK(w.agents[1].carbon_biomass == doctest::Approx(4.0).epsilon(1e-15));
  }
  SUBCASE("conservation: target loss equals gain over efficiency") {
    for (double eff : {1.0, 0.35}) {
      SimProgram p = compile(grazing(0.7, 0.3, eff));
      WorldState w = init_world(p, quiet_config(5));
      for (int i = 0; i < 3; ++i) {
        double sheep_before = 0;
        double grass_before = 0;
        for (const auto& a : w.agents) (a.breed == 0 ? sheep_before : grass_before) +=
            a.carbon_biomass;
        tick(w, p);
        double sheep_after = 0;
        double grass_after = 0;
        for (const auto& a : w.agents) (a.breed == 0 ? sheep_after : grass_after) +=
            a.carbon_biomass;
        // dead agents are gone but only lose biomass by being eaten to 0
        double lost = grass_before - grass_after;
        double gained = sheep_after - sheep_before;
        CHECK(gained == doctest::Approx(lost * eff).epsilon(1e-12));
        if (eff == 1.0) CHECK(sheep_after + grass_after == doctest::Approx(sheep_before +
                                                                          grass_before));
      }
    }
  }
  SUBCASE("nearest target wins, ties go to the lower id") {
    ConceptualModel m = grazing(1.0, 1.0, 1.0, 1, 3);
    SimProgram p = compile(m);
    WorldState w = init_world(p, quiet_config());
    place(w, 0, 10, 10);
    place(w, 1, 10.6, 10);    // farther
    place(w, 2, 10, 10.4);    // tied nearest, lower id
    place(w, 3, 9.6, 10);     // tied nearest, higher id
    tick(w, p);
    CHECK(w.agents.size() == 3);
    CHECK(w.agents[1].id == 1);
    CHECK(w.agents[2].id == 3);
  }
  SUBCASE("targets beyond the radius are ignored, across the seam too") {
    ConceptualModel m = grazing(1.0, 1.0, 1.0, 1, 2);
    SimProgram p = compile(m);
    WorldState w = init_world(p, quiet_config());
    place(w, 0, 0.2, 5);
    place(w, 1, 2.0, 5);    // 1.8 away
    place(w, 2, 31.5, 5);   // 0.7 away through the seam
    tick(w, p);
    CHECK(live_of(w, 1).size() == 1);
    CHECK(live_of(w, 1)[0]->id == 1);
  }
}

// ---- destroy ----------------------------------------------------------------

TEST_CASE("destroy") {
  auto model = [](double rate) {
    ConceptualModel m;
    m.components.push_back(make_biotic("wolf", {.starting_population = 1, .body_mass = 30}));
    m.components.push_back(make_biotic("grass", {.starting_population = 1, .body_mass = 5}));
    m.relationships.push_back(
        make_rel("trample", RelationshipKind::Destroys, "wolf", "grass",
                 {.interaction_probability = 1.0, .destruction_rate = rate}));
    return m;
  };
  SUBCASE("rate 1.0 removes the target") {
    SimProgram p = compile(model(1.0));
    WorldState w = init_world(p, quiet_config());
    place(w, 1, w.agents[0].x, w.agents[0].y);
    CHECK(tick(w, p).counts[1] == 0);
  }
  SUBCASE("rate 0.10 reduces biomass by 10% and gives the source nothing") {
    SimProgram p = compile(model(0.10));
    WorldState w = init_world(p, quiet_config());
    place(w, 1, w.agents[0].x, w.agents[0].y);
    tick(w, p);
    CHECK(w.agents[1].carbon_biomass == doctest::Approx(4.5).epsilon(1e-15));
    CHECK(w.agents[0].carbon_biomass == 30);
  }
  SUBCASE("abiotic target loses a fraction of the pool") {
    ConceptualModel m;
    m.components.push_back(make_biotic("wolf", {.starting_population = 2}));
    m.components.push_back(make_abiotic("water", {.amount = 100}));
    m.relationships.push_back(
        make_rel("foul", RelationshipKind::Destroys, "wolf", "water",
                 {.interaction_probability = 1.0, .destruction_rate = 0.1}));
    SimProgram p = compile(m);
    WorldState w = init_world(p, quiet_config());
    CHECK(tick(w, p).counts[1] == doctest::Approx(81.0));
  }
}

// ---- affect -----------------------------------------------------------------

TEST_CASE("affect") {
  auto pool_model = [](double growth, double probability) {
    ConceptualModel m;
    m.components.push_back(make_abiotic("sun", {.amount = 1, .growth_rate = growth}));
    m.components.push_back(make_abiotic("water", {.amount = 100}));
    m.relationships.push_back(
        make_rel("a", RelationshipKind::Affects, "sun", "water",
                 {.interaction_probability = probability, .growth_rate = growth}));
    return m;
  };
  SUBCASE("growth 0 has no effect") {
    SimProgram p = compile(pool_model(0.0, 1.0));
    WorldState w = init_world(p, quiet_config());
    CHECK(tick(w, p).counts[1] == 100);
  }
  SUBCASE("0.10 on a pool of 100 gives 110") {
    SimProgram p = compile(pool_model(0.10, 1.0));
    WorldState w = init_world(p, quiet_config());
    CHECK(tick(w, p).counts[1] == doctest::Approx(110.0).epsilon(1e-15));
  }
  SUBCASE("probability 0.5 applies on the draws that succeed") {
    SimProgram p = compile(pool_model(0.10, 0.5));
    EngineConfig cfg = quiet_config(77);
    WorldState w = init_world(p, cfg);
    Rng replay(cfg.rng_seed);
    double expected = 100;
    int successes = 0;
    for (int t = 0; t < 40; ++t) {
      if (replay.uniform() < 0.5) {
        expected *= 1.10;
        ++successes;
      }
      CHECK(tick(w, p).counts[1] == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(successes > 5);
    CHECK(successes < 35);
  }
  SUBCASE("biotic target spawns more next tick") {
    ConceptualModel m;
    m.components.push_back(make_abiotic("rain", {.amount = 1}));
    m.components.push_back(
        make_biotic("grass", {.starting_population = 0, .minimum_population = 100}));
    m.relationships.push_back(make_rel("a", RelationshipKind::Affects, "rain", "grass",
                                       {.interaction_probability = 1.0, .growth_rate = 0.5}));
    SimProgram p = compile(m);
    EngineConfig cfg = quiet_config();
    cfg.replenish_fraction = 0.2;
    WorldState w = init_world(p, cfg);
    CHECK(tick(w, p).counts[1] == 20);       // boost set during this tick, used next
    CHECK(tick(w, p).counts[1] == 20 + 24);  // ceil(0.2 * 80) = 16, times 1.5
  }
}

// ---- produce ----------------------------------------------------------------

TEST_CASE("produce") {
  SUBCASE("rate 0 leaves the accumulator at 0") {
    ConceptualModel m;
    m.components.push_back(make_biotic("sheep", {.starting_population = 3}));
    m.components.push_back(make_abiotic("dung", {}));
    m.relationships.push_back(make_rel("p", RelationshipKind::Produces, "sheep", "dung",
                                       {.production_rate = 0.0}));
    SimProgram p = compile(m);
    WorldState w = init_world(p, quiet_config());
    tick(w, p);
    CHECK(w.produce_accumulators.back() == 0);
    CHECK(w.pools[0] == 0);
  }
  SUBCASE("rate 1 per tick adds one unit per source agent per tick") {
    ConceptualModel m;
    m.components.push_back(make_biotic("sheep", {.starting_population = 3}));
    m.components.push_back(make_abiotic("dung", {}));
    m.relationships.push_back(make_rel("p", RelationshipKind::Produces, "sheep", "dung",
                                       {.production_rate = 1.0}));
    SimProgram p = compile(m);
    WorldState w = init_world(p, quiet_config());
    for (int t = 1; t <= 4; ++t) CHECK(tick(w, p).counts[1] == doctest::Approx(3.0 * t));
  }
  SUBCASE("biotic spawn count is floor(accumulated / body mass)") {
    ConceptualModel m;
    m.components.push_back(make_biotic("tree", {.starting_population = 3}));
    m.components.push_back(make_biotic("seedling", {.starting_population = 0, .body_mass = 2}));
    m.relationships.push_back(make_rel("p", RelationshipKind::Produces, "tree", "seedling",
                                       {.production_rate = 0.5}));
    SimProgram p = compile(m);
    EngineConfig cfg = quiet_config();
    cfg.seconds_per_tick = 1;  // keeps the per-tick amounts exact
    cfg.rate_scale = 1;
    WorldState w = init_world(p, cfg);
    double acc = 0;
    double seedlings = 0;
    for (int t = 1; t <= 6; ++t) {
      acc += 3 * 0.5;
      double spawned = std::floor(acc / 2);
      acc -= spawned * 2;
      seedlings += spawned;
      CHECK(tick(w, p).counts[1] == seedlings);
      CHECK(w.produce_accumulators.back() == doctest::Approx(acc));
    }
  }
}

// ---- abiotic replenish ---------------------------------------------------------

TEST_CASE("abiotic replenish") {
  auto run_pool = [](double amount, double minimum, double fraction, int ticks) {
    ConceptualModel m;
    m.components.push_back(make_abiotic("water", {.amount = amount, .minimum_amount = minimum}));
    SimProgram p = compile(m);
    EngineConfig cfg = quiet_config();
    cfg.replenish_fraction = fraction;
    WorldState w = init_world(p, cfg);
    std::vector<double> out;
    for (int t = 0; t < ticks; ++t) out.push_back(tick(w, p).counts[0]);
    return out;
  };
  CHECK(run_pool(150, 100, 0.5, 1)[0] == 150);
  CHECK(run_pool(0, 100, 0.77, 1)[0] == doctest::Approx(77.0).epsilon(1e-15));
  auto series = run_pool(0, 100, 0.3, 60);
  for (std::size_t t = 0; t < series.size(); ++t) {
    double bound = 100 * std::pow(0.7, static_cast<double>(t + 1));
    CHECK(100 - series[t] == doctest::Approx(bound).epsilon(1e-9));
    CHECK(series[t] <= 100);
  }
}

// ---- run and CSV ------------------------------------------------------------

TEST_CASE("eleven ticks give twelve records and the month header") {
  SimProgram p = compile(running_example());
  EngineConfig cfg;
  cfg.max_ticks = 11;
  cfg.rng_seed = 7;
  TimeSeries ts = run(p, cfg);
  CHECK(ts.records.size() == 12);
  CHECK(ts.labels == std::vector<std::string>{"Wolf", "Sheep", "Grass"});
  std::string csv = ts.to_csv();
  CHECK(csv.rfind("Month,Wolf,Sheep,Grass\n0,200,1200,1000\n1,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
  CHECK(csv_header(p) == "Month,Wolf,Sheep,Grass\n");
  CHECK(csv_row(ts.records[0]) == "0,200,1200,1000\n");
}

TEST_CASE("max_ticks 0 gives only the initial record") {
  EngineConfig cfg;
  cfg.max_ticks = 0;
  CHECK(run(compile(running_example()), cfg).records.size() == 1);
}

TEST_CASE("same program and seed give byte-identical CSV") {
  SimProgram p = compile(running_example());
  EngineConfig cfg;
  cfg.max_ticks = 24;
  cfg.rng_seed = 12345;
  CHECK(run(p, cfg).to_csv() == run(p, cfg).to_csv());
}

TEST_CASE("labels needing quotes and abiotic amounts round to integers") {
  ConceptualModel m;
  m.components.push_back(make_abiotic("w", {.amount = 2.5}));
  m.components.back().display_name = "Water, fresh";
  m.components.push_back(make_abiotic("x", {.amount = 7.49}));
  m.components.back().display_name = "The \"x\"";
  EngineConfig cfg;
  cfg.max_ticks = 0;
  CHECK(run(compile(m), cfg).to_csv() == "Month,\"Water, fresh\",\"The \"\"x\"\"\"\n0,3,7\n");
}

TEST_CASE("records stream in tick order and the sink can stop the run") {
  SimProgram p = compile(running_example());
  EngineConfig cfg;
  cfg.max_ticks = 30;
  std::vector<std::int64_t> seen;
  TimeSeries ts = run(p, cfg, [&](const PopulationRecord& r) {
    seen.push_back(r.tick);
    return r.tick < 5;
  });
  CHECK(seen == std::vector<std::int64_t>{0, 1, 2, 3, 4, 5});
  CHECK(ts.records.size() == 6);
}

// ---- kernels: serial reference against parallel -----------------------------

TEST_CASE("candidate search: bucket grid matches brute force") {
  std::mt19937_64 gen(42);
  for (double size : {1.0, 2.0, 7.0, 32.0}) {
    for (double radius : {0.0, 0.3, 1.0, 2.5, 11.0, 40.0}) {
      std::uniform_real_distribution<double> pos(0, size);
      std::vector<Agent> agents(300);
      for (std::size_t i = 0; i < agents.size(); ++i) {
        agents[i].x = pos(gen);
        agents[i].y = pos(gen);
      }
      // some exact duplicates and boundary points
      agents[5].x = agents[4].x;
      agents[5].y = agents[4].y;
      agents[6].x = 0;
      agents[7].x = std::nextafter(size, 0.0);
      std::vector<std::uint32_t> sources;
      std::vector<std::uint32_t> targets;
      for (std::uint32_t i = 0; i < agents.size(); ++i) {
        if (i % 3 == 0) sources.push_back(i);
        if (i % 2 == 0) targets.push_back(i);
      }
      auto a = kernels::serial::find_candidates(agents, sources, targets, radius, size);
      auto b = kernels::parallel::find_candidates(agents, sources, targets, radius, size);
      CHECK(a.offsets == b.offsets);
      CHECK(a.targets == b.targets);
    }
  }
}

TEST_CASE("biomass kernel: parallel matches serial") {
  std::vector<Agent> a(1000);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> mass(0, 2);
  for (auto& ag : a) ag.carbon_biomass = mass(gen);
  a[10].alive = false;
  auto b = a;
  std::vector<std::uint32_t> members;
  for (std::uint32_t i = 0; i < a.size(); i += 2) members.push_back(i);
  auto da = kernels::serial::apply_biomass_delta(a, members, -0.7);
  auto db = kernels::parallel::apply_biomass_delta(b, members, -0.7);
  CHECK(da == db);
  CHECK(a == b);
  CHECK(da > 100);
}

TEST_CASE("whole runs agree between serial and parallel execution") {
  SimProgram p = compile(running_example());
  EngineConfig cfg;
  cfg.rng_seed = 8;
  cfg.rate_scale = kPerTick;
  WorldState s = init_world(p, cfg);
  WorldState q = init_world(p, cfg);
  for (int t = 0; t < 30; ++t) {
    tick(s, p, ExecutionPolicy::Serial);
    tick(q, p, ExecutionPolicy::Parallel);
    REQUIRE(s == q);
  }
}

TEST_CASE("ensemble equals independent runs, in seed order") {
  SimProgram p = compile(grazing(0.5, 1.0, 1.0));
  EngineConfig cfg;
  cfg.max_ticks = 12;
  std::vector<std::uint64_t> seeds{4, 1, 9, 4};
  auto par = run_ensemble(p, cfg, seeds, ExecutionPolicy::Parallel);
  auto ser = run_ensemble(p, cfg, seeds, ExecutionPolicy::Serial);
  REQUIRE(par.size() == 4);
  CHECK(par == ser);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    EngineConfig c = cfg;
    c.rng_seed = seeds[i];
    CHECK(par[i] == run(p, c));
  }
  CHECK(par[0] == par[3]);
  CHECK(par[0] != par[1]);
}

// ---- invariants over randomized worlds ----------------------------------------

TEST_CASE("torus, cap, age and non-negativity hold over 10,000 randomized ticks") {
  auto sweep = ecoloom::testing::sweep_random_worlds(20240601, 10000);
  CHECK_MESSAGE(sweep.first_failure.empty(), sweep.first_failure);
  CHECK(sweep.ticks == 10000);
  CHECK(sweep.worlds > 50);
}

TEST_CASE("invariant checker notices corrupted worlds") {
  using ecoloom::testing::broken_invariant;
  SimProgram p = compile(running_example());
  WorldState w = init_world(p, EngineConfig{});
  CHECK(broken_invariant(w, p).empty());
  WorldState off = w;
  off.agents[3].x = 32.0;
  CHECK(broken_invariant(off, p) == "agent off the torus");
  WorldState starved = w;
  starved.agents[5].carbon_biomass = 0;
  CHECK(broken_invariant(starved, p) == "live agent with biomass <= 0");
  WorldState old = w;
  old.agents[0].age = 181;
  CHECK(broken_invariant(old, p) == "agent older than its lifespan");
  WorldState crowded = w;
  crowded.config.max_agents = 100;
  CHECK(broken_invariant(crowded, p) == "agent cap exceeded");
}

TEST_CASE("tick matches its documented phases") {
  std::mt19937_64 gen(77);
  for (int k = 0; k < 20; ++k) {
    ConceptualModel m = random_world(gen);
    if (!validate_model(apply_defaults(m)).ok()) continue;
    SimProgram p = compile(m);
    EngineConfig cfg;
    cfg.rng_seed = k;
    cfg.rate_scale = kPerTick;
    cfg.max_agents = 400;
    WorldState a;
    try {
      a = init_world(p, cfg);
    } catch (const CapacityError&) {
      continue;
    }
    WorldState b = a;
    for (int t = 0; t < 10; ++t) {
      tick(a, p);
      for (auto& ag : b.agents) {
        if (ag.alive) ++ag.age;
      }
      for (auto& bs : b.breeds) {
        bs.boost = bs.next_boost;
        bs.next_boost = 1.0;
      }
      for (std::size_t i = 0; i < p.methods.size(); ++i) execute_method(b, p, i);
      remove_dead(b);
      ++b.tick;
      REQUIRE(a == b);
    }
  }
}

TEST_CASE("engine config") {
  EngineConfig base;
  CHECK(base.grid_size == 32);
  CHECK(base.max_agents == 25000);
  CHECK(base.seconds_per_tick == 2592000);
  auto cfg = config_from_json(nlohmann::json::parse(R"({"max_ticks": 11, "rng_seed": 7})"));
  CHECK(cfg.max_ticks == 11);
  CHECK(cfg.rng_seed == 7);
  CHECK(cfg.grid_size == 32);
  CHECK(config_from_json(config_to_json(cfg)) == cfg);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"gridsize": 3})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"grid_size": "3"})")), ConfigError);
  EngineConfig bad;
  bad.replenish_fraction = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = EngineConfig{};
  bad.max_agents = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}
