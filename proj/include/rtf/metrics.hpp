#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rtf/distribution.hpp"
#include "rtf/sequences.hpp"

namespace rtf {

/// Per-sample memory-load counts of one sampler run.
using LoadTrace = std::vector<std::uint32_t>;

struct LoadStats {
  std::uint32_t max = 0;
  double average = 0;
  /// Mean over consecutive disjoint groups of the per-group maximum; models
  /// lanes of a SIMT group waiting for their slowest member.
  double average_group = 0;
};

/// A trailing partial group is dropped from average_group. Throws EmptyTrace
/// for an empty trace or one shorter than a single group.
LoadStats stats(std::span<const std::uint32_t> counts, std::uint32_t group_size = 32);

/// Sum over i of (p_i - c_i/total)^2 with p normalized.
double quadratic_error(const Pmf& pmf, const Histogram& histogram);

/// Adjacent pairs of an ascending grid whose results decrease.
template <class Sampler>
std::uint64_t monotonicity_violations(Sampler&& sampler, std::span<const double> grid) {
  std::uint64_t violations = 0;
  if (grid.empty()) return 0;
  auto previous = sampler(grid[0]);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    auto current = sampler(grid[k]);
    if (previous > current) ++violations;
    previous = current;
  }
  return violations;
}

/// Counts the indices returned for each point of the stream; `component`
/// selects which coordinate (0: x, 1: y) is fed to the sampler.
template <class Sampler>
Histogram histogram(Sampler&& sampler, PointStream& stream, std::size_t intervals, int component = 0) {
  Histogram hist(intervals);
  while (const auto p = stream.next()) hist.add(sampler(component == 0 ? p->x : p->y));
  return hist;
}

}  // namespace rtf
