#pragma once

// Survey samplers: linear search, binary search, the cutpoint method with
// linear or binary in-cell search, and the alias method.
//
// Load counting convention: one load per guide-table entry or alias cell
// fetched, one per CDF bound probed during a search.

#include <concepts>
#include <cstdint>
#include <span>
#include <vector>

#include "rtf/cell.hpp"
#include "rtf/distribution.hpp"

namespace rtf {

/// Per-call memory-load tally owned by the caller.
class LoadCounter {
 public:
  void add(std::uint32_t k = 1) noexcept { count_ += k; }
  std::uint32_t count() const noexcept { return count_; }
  void reset() noexcept { count_ = 0; }

 private:
  std::uint32_t count_ = 0;
};

namespace detail {

inline void count_load(LoadCounter* counter, std::uint32_t k = 1) noexcept {
  if (counter) counter->add(k);
}

/// Largest i in [lo, hi] with c[i] <= xi, given c[lo] <= xi and c[hi + 1] > xi.
template <std::floating_point Scalar>
std::uint32_t bisect(std::span<const Scalar> c, Scalar xi, std::uint32_t lo, std::uint32_t hi,
                     LoadCounter* counter) noexcept {
  while (lo < hi) {
    const std::uint32_t mid = lo + (hi - lo + 1) / 2;
    count_load(counter);
    if (xi < c[mid]) {
      hi = mid - 1;
    } else {
      lo = mid;
    }
  }
  return lo;
}

}  // namespace detail

template <std::floating_point Scalar>
std::uint32_t sample_linear(const Cdf<Scalar>& cdf, Scalar xi, LoadCounter* counter = nullptr) noexcept {
  const auto c = cdf.bounds();
  const auto n = static_cast<std::uint32_t>(cdf.intervals());
  std::uint32_t i = 0;
  for (; i + 1 < n; ++i) {
    detail::count_load(counter);
    if (xi < c[i + 1]) return i;
  }
  detail::count_load(counter);
  return i;
}

template <std::floating_point Scalar>
std::uint32_t sample_binary(const Cdf<Scalar>& cdf, Scalar xi, LoadCounter* counter = nullptr) noexcept {
  return detail::bisect(cdf.bounds(), xi, 0u, static_cast<std::uint32_t>(cdf.intervals() - 1), counter);
}

/// Cutpoint guide table: first[g] is the interval containing the start of cell g.
struct GuideTable {
  std::vector<std::uint32_t> first;

  std::uint32_t cells() const noexcept { return static_cast<std::uint32_t>(first.size()); }
};

template <std::floating_point Scalar>
GuideTable build_guide_table(const Cdf<Scalar>& cdf, std::uint32_t m);

template <std::floating_point Scalar>
std::uint32_t sample_cutpoint_linear(const GuideTable& table, const Cdf<Scalar>& cdf, Scalar xi,
                                     LoadCounter* counter = nullptr) noexcept {
  const auto c = cdf.bounds();
  const auto n = static_cast<std::uint32_t>(cdf.intervals());
  std::uint32_t i = table.first[cell_of(xi, table.cells())];
  detail::count_load(counter);
  for (; i + 1 < n; ++i) {
    detail::count_load(counter);
    if (xi < c[i + 1]) return i;
  }
  detail::count_load(counter);
  return i;
}

/// Binary search bracketed by the first interval of this cell and the first
/// interval of the next one (the last interval for the last cell). The two
/// adjacent table entries count as one fetch.
template <std::floating_point Scalar>
std::uint32_t sample_cutpoint_binary(const GuideTable& table, const Cdf<Scalar>& cdf, Scalar xi,
                                     LoadCounter* counter = nullptr) noexcept {
  const std::uint32_t m = table.cells();
  const std::uint32_t g = cell_of(xi, m);
  const std::uint32_t lo = table.first[g];
  const std::uint32_t hi = g + 1 < m ? table.first[g + 1] : static_cast<std::uint32_t>(cdf.intervals() - 1);
  detail::count_load(counter);
  return detail::bisect(cdf.bounds(), xi, lo, hi, counter);
}

struct AliasCell {
  /// Fraction of the cell kept by the cell's own interval, in [0,1].
  double threshold = 1;
  std::uint32_t alias = 0;
};

/// One cell per interval. Cell j resolves to j when the in-cell position is
/// below threshold, else to alias.
struct AliasTable {
  std::vector<AliasCell> cells;

  std::size_t size() const noexcept { return cells.size(); }
};

/// Two-worklist (small/large) linear-time construction.
AliasTable build_alias_table(const Pmf& pmf);

/// The threshold compares the in-cell fraction u = xi*n - floor(xi*n), so
/// thresholds stay normalized to [0,1] regardless of n.
inline std::uint32_t sample_alias(const AliasTable& table, double xi, LoadCounter* counter = nullptr) noexcept {
  const auto n = static_cast<std::uint32_t>(table.cells.size());
  const double x = xi * n;
  auto cell = static_cast<std::uint32_t>(x);
  if (cell >= n) cell = n - 1;
  const double u = x - cell;
  detail::count_load(counter);
  const AliasCell& entry = table.cells[cell];
  return u < entry.threshold ? cell : entry.alias;
}

/// Lebesgue measure of {xi : sample_alias(xi) = i} for every i, computed
/// from the table entries.
std::vector<double> alias_measure(const AliasTable& table);

extern template GuideTable build_guide_table(const Cdf<float>&, std::uint32_t);
extern template GuideTable build_guide_table(const Cdf<double>&, std::uint32_t);

}  // namespace rtf
