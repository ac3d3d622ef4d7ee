#include "rtf/metrics.hpp"

#include <algorithm>

namespace rtf {

LoadStats stats(std::span<const std::uint32_t> counts, std::uint32_t group_size) {
  if (group_size == 0) throw Error(ErrorCode::InvalidArgument, "group size must be positive");
  if (counts.empty()) throw Error(ErrorCode::EmptyTrace, "load trace is empty");
  const std::size_t groups = counts.size() / group_size;
  if (groups == 0) throw Error(ErrorCode::EmptyTrace, "load trace is shorter than one group");

  LoadStats out;
  std::uint64_t sum = 0;
  for (const std::uint32_t c : counts) {
    sum += c;
    out.max = std::max(out.max, c);
  }
  out.average = static_cast<double>(sum) / static_cast<double>(counts.size());

  std::uint64_t group_sum = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    const auto group = counts.subspan(g * group_size, group_size);
    group_sum += *std::max_element(group.begin(), group.end());
  }
  out.average_group = static_cast<double>(group_sum) / static_cast<double>(groups);
  return out;
}

double quadratic_error(const Pmf& pmf, const Histogram& histogram) {
  if (histogram.counts.size() != pmf.size()) {
    throw Error(ErrorCode::LengthMismatch, "histogram and pmf lengths differ");
  }
  if (histogram.total == 0) throw Error(ErrorCode::EmptyHistogram, "histogram has no samples");
  const auto total = static_cast<long double>(histogram.total);
  long double e = 0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    const long double d = pmf.weights()[i] / pmf.total() - histogram.counts[i] / total;
    e += d * d;
  }
  return static_cast<double>(e);
}

}  // namespace rtf
