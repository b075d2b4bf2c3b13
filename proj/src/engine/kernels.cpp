#include "ecoloom/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace ecoloom::kernels {

double wrap(double v, double size) {
  double r = std::fmod(v, size);
  if (r < 0) r += size;
  // r + size can round up to exactly `size` for tiny negative r.
  if (r >= size) r = 0.0;
  return r;
}

double torus_distance_sq(double ax, double ay, double bx, double by, double size) {
  double dx = std::fabs(ax - bx);
  double dy = std::fabs(ay - by);
  dx = std::min(dx, size - dx);
  dy = std::min(dy, size - dy);
  return dx * dx + dy * dy;
}

namespace {

struct Candidate {
  double dist_sq;
  std::uint32_t index;
  bool operator<(const Candidate& o) const {
    return dist_sq != o.dist_sq ? dist_sq < o.dist_sq : index < o.index;
  }
};

CandidateLists flatten(std::vector<std::vector<Candidate>>& per_source) {
  CandidateLists out;
  out.offsets.resize(per_source.size() + 1, 0);
  for (std::size_t i = 0; i < per_source.size(); ++i) {
    out.offsets[i + 1] = out.offsets[i] + per_source[i].size();
  }
  out.targets.resize(out.offsets.back());
  for (std::size_t i = 0; i < per_source.size(); ++i) {
    std::size_t o = out.offsets[i];
    for (const auto& c : per_source[i]) out.targets[o++] = c.index;
  }
  return out;
}

// Uniform buckets at least `radius` wide, so every hit lies in the 3x3
// block around the source's bucket.
class BucketGrid {
 public:
  BucketGrid(std::span<const Agent> agents, std::span<const std::uint32_t> targets, double radius,
             double size) {
    constexpr int kMaxBuckets = 256;
    // The slack keeps bucket width strictly above the radius despite rounding.
    double per_side = radius > 0 ? std::floor(size / radius * (1 - 1e-9)) : kMaxBuckets;
    n_ = static_cast<int>(std::clamp(per_side, 1.0, static_cast<double>(kMaxBuckets)));
    width_ = size / n_;
    start_.assign(static_cast<std::size_t>(n_) * n_ + 1, 0);
    std::vector<std::uint32_t> bucket(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const Agent& a = agents[targets[i]];
      bucket[i] = static_cast<std::uint32_t>(cell(a.x) * n_ + cell(a.y));
      ++start_[bucket[i] + 1];
    }
    for (std::size_t b = 1; b < start_.size(); ++b) start_[b] += start_[b - 1];
    items_.resize(targets.size());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < targets.size(); ++i) items_[fill[bucket[i]]++] = targets[i];
  }

  template <typename Fn>
  void for_neighbors(double x, double y, Fn&& fn) const {
    int cx = cell(x);
    int cy = cell(y);
    if (n_ < 3) {
      // Small grids: every bucket is a neighbor; visit each once.
      for (std::size_t i = 0; i < items_.size(); ++i) fn(items_[i]);
      return;
    }
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        int bx = (cx + dx + n_) % n_;
        int by = (cy + dy + n_) % n_;
        std::size_t b = static_cast<std::size_t>(bx) * n_ + by;
        for (std::size_t i = start_[b]; i < start_[b + 1]; ++i) fn(items_[i]);
      }
    }
  }

 private:
  int cell(double v) const {
    int c = static_cast<int>(v / width_);
    return std::clamp(c, 0, n_ - 1);
  }

  int n_ = 1;
  double width_ = 1;
  std::vector<std::size_t> start_;
  std::vector<std::uint32_t> items_;
};

}  // namespace

namespace serial {

CandidateLists find_candidates(std::span<const Agent> agents,
                               std::span<const std::uint32_t> sources,
                               std::span<const std::uint32_t> targets, double radius,
                               double size) {
  const double r2 = radius * radius;
  std::vector<std::vector<Candidate>> per_source(sources.size());
  for (std::size_t s = 0; s < sources.size(); ++s) {
    const Agent& a = agents[sources[s]];
    for (std::uint32_t t : targets) {
      if (t == sources[s]) continue;
      const Agent& b = agents[t];
      double d2 = torus_distance_sq(a.x, a.y, b.x, b.y, size);
      if (d2 <= r2) per_source[s].push_back({d2, t});
    }
    std::sort(per_source[s].begin(), per_source[s].end());
  }
  return flatten(per_source);
}

std::int64_t apply_biomass_delta(std::span<Agent> agents, std::span<const std::uint32_t> members,
                                 double delta) {
  std::int64_t deaths = 0;
  for (std::uint32_t i : members) {
    Agent& a = agents[i];
    if (!a.alive) continue;
    a.carbon_biomass += delta;
    if (a.carbon_biomass <= 0) {
      a.alive = false;
      ++deaths;
    }
  }
  return deaths;
}

}  // namespace serial

namespace parallel {

CandidateLists find_candidates(std::span<const Agent> agents,
                               std::span<const std::uint32_t> sources,
                               std::span<const std::uint32_t> targets, double radius,
                               double size) {
  const double r2 = radius * radius;
  BucketGrid grid(agents, targets, radius, size);
  std::vector<std::vector<Candidate>> per_source(sources.size());
  const auto n = static_cast<std::int64_t>(sources.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t s = 0; s < n; ++s) {
    const std::uint32_t self = sources[s];
    const Agent& a = agents[self];
    auto& out = per_source[s];
    grid.for_neighbors(a.x, a.y, [&](std::uint32_t t) {
      if (t == self) return;
      const Agent& b = agents[t];
      double d2 = torus_distance_sq(a.x, a.y, b.x, b.y, size);
      if (d2 <= r2) out.push_back({d2, t});
    });
    std::sort(out.begin(), out.end());
  }
  return flatten(per_source);
}

std::int64_t apply_biomass_delta(std::span<Agent> agents, std::span<const std::uint32_t> members,
                                 double delta) {
  std::int64_t deaths = 0;
  const auto n = static_cast<std::int64_t>(members.size());
#pragma omp parallel for schedule(static) reduction(+ : deaths)
  for (std::int64_t k = 0; k < n; ++k) {
    Agent& a = agents[members[k]];
    if (!a.alive) continue;
    a.carbon_biomass += delta;
    if (a.carbon_biomass <= 0) {
      a.alive = false;
      ++deaths;
    }
  }
  return deaths;
}

}  // namespace parallel

}  // namespace ecoloom::kernels
