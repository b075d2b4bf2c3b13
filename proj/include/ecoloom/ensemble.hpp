#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ecoloom/engine.hpp"

namespace ecoloom {

/// One run per seed (cfg.rng_seed replaced). Runs are independent worlds,
/// so the parallel version distributes them across OpenMP threads; the
/// result order follows `seeds` either way.
std::vector<TimeSeries> run_ensemble(const SimProgram& p, const EngineConfig& cfg,
                                     std::span<const std::uint64_t> seeds,
                                     ExecutionPolicy policy = ExecutionPolicy::Parallel);

}  // namespace ecoloom
