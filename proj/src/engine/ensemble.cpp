#include "ecoloom/ensemble.hpp"

#include <exception>

namespace ecoloom {

std::vector<TimeSeries> run_ensemble(const SimProgram& p, const EngineConfig& cfg,
                                     std::span<const std::uint64_t> seeds,
                                     ExecutionPolicy policy) {
  std::vector<TimeSeries> out(seeds.size());
  const auto n = static_cast<std::int64_t>(seeds.size());
  if (policy == ExecutionPolicy::Serial) {
    for (std::int64_t i = 0; i < n; ++i) {
      EngineConfig c = cfg;
      c.rng_seed = seeds[i];
      out[i] = run(p, c, {}, ExecutionPolicy::Serial);
    }
    return out;
  }
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      EngineConfig c = cfg;
      c.rng_seed = seeds[i];
      out[i] = run(p, c, {}, ExecutionPolicy::Parallel);
    } catch (...) {
#pragma omp critical(ecoloom_ensemble_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace ecoloom
