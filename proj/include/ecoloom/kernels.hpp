#pragma once

// Data-parallel inner loops of the engine. Each kernel has an OpenMP
// version (namespace parallel) and a plain serial reference (namespace
// serial) that the tests and the benchmark compare against. Both produce
// bit-identical results for any thread count.

#include <cstdint>
#include <span>
#include <vector>

#include "ecoloom/world.hpp"

namespace ecoloom::kernels {

/// Wraps a coordinate onto [0, size).
double wrap(double v, double size);

/// Squared Euclidean distance on a size x size torus.
double torus_distance_sq(double ax, double ay, double bx, double by, double size);

/// For every source, the targets within `radius` (torus metric), nearest
/// first, ties by lower agent index. Indices refer to the agent array.
struct CandidateLists {
  std::vector<std::size_t> offsets;  // sources + 1 entries
  std::vector<std::uint32_t> targets;

  std::span<const std::uint32_t> of(std::size_t source) const {
    return {targets.data() + offsets[source], targets.data() + offsets[source + 1]};
  }
  bool operator==(const CandidateLists&) const = default;
};

namespace serial {

/// Brute-force O(sources x targets) reference.
CandidateLists find_candidates(std::span<const Agent> agents,
                               std::span<const std::uint32_t> sources,
                               std::span<const std::uint32_t> targets, double radius,
                               double size);

/// Adds `delta` to each member's biomass and kills members left at <= 0.
/// Returns the number of deaths.
std::int64_t apply_biomass_delta(std::span<Agent> agents, std::span<const std::uint32_t> members,
                                 double delta);

}  // namespace serial

namespace parallel {

/// Bucket-grid search; sources are processed concurrently.
CandidateLists find_candidates(std::span<const Agent> agents,
                               std::span<const std::uint32_t> sources,
                               std::span<const std::uint32_t> targets, double radius,
                               double size);

std::int64_t apply_biomass_delta(std::span<Agent> agents, std::span<const std::uint32_t> members,
                                 double delta);

}  // namespace parallel

}  // namespace ecoloom::kernels
