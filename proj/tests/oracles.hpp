#pragma once

// Reference implementations used only by the tests. They are written from the
// definitions, deliberately naive, and share no code with the library beyond
// its public types.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rtf/distribution.hpp"
#include "rtf/radix_forest.hpp"

namespace oracle {

/// Normalized prefix sums in long double; last bound forced to 1.
inline std::vector<double> prefix_bounds(const std::vector<double>& w) {
  long double total = 0;
  for (double x : w) total += x;
  std::vector<double> c(w.size() + 1, 0.0);
  long double run = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    run += w[i];
    c[i + 1] = static_cast<double>(run / total);
  }
  c.back() = 1.0;
  return c;
}

/// The interval [C[i], C[i+1]) holding xi, scanning down from the top.
template <class Scalar>
std::uint32_t locate(std::span<const Scalar> c, Scalar xi) {
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    if (c[i] <= xi && c[i] < c[i + 1]) return static_cast<std::uint32_t>(i);
  }
  return 0;
}

template <class Scalar>
std::uint32_t cell(Scalar x, std::uint32_t m) {
  const double scaled = static_cast<double>(x * static_cast<Scalar>(m));
  return std::min<std::uint32_t>(static_cast<std::uint32_t>(std::floor(scaled)), m - 1);
}

/// Interval containing the first point of cell g (found by scanning floats).
template <class Scalar>
std::uint32_t first_of_cell(std::span<const Scalar> c, std::uint32_t g, std::uint32_t m) {
  std::uint32_t best = 0;
  for (std::uint32_t i = 0; i + 1 < c.size(); ++i) {
    if (cell(c[i], m) < g) best = i;
    if (cell(c[i], m) >= g) {
      // C[i] is in cell >= g; if it sits exactly at the start of cell g it is the answer.
      if (cell(c[i], m) == g && (c[i] == Scalar(0) || cell(std::nextafter(c[i], Scalar(0)), m) < g)) best = i;
      break;
    }
  }
  return best;
}

/// Top-down forest: each cell's leaves are split recursively at the boundary
/// with the largest XOR of adjacent bounds, the split index doubling as the
/// node slot. Matches the documented layout of build_forest without rebalancing.
template <class Scalar>
struct TopDownForest {
  std::vector<rtf::ForestNode> nodes;
  std::vector<rtf::NodeRef> table;
};

template <class Scalar>
rtf::NodeRef split_range(std::span<const Scalar> c, std::uint32_t lo, std::uint32_t hi,
                         std::vector<rtf::ForestNode>& nodes) {
  if (lo == hi) return rtf::NodeRef::leaf(lo);
  std::uint32_t s = lo + 1;
  auto best = rtf::xor_distance(c[lo], c[lo + 1]);
  for (std::uint32_t i = lo + 1; i < hi; ++i) {
    const auto d = rtf::xor_distance(c[i], c[i + 1]);
    if (d > best) {
      best = d;
      s = i + 1;
    }
  }
  nodes[s].child[0] = split_range(c, lo, s - 1, nodes);
  nodes[s].child[1] = split_range(c, s, hi, nodes);
  return rtf::NodeRef::internal(s);
}

template <class Scalar>
TopDownForest<Scalar> top_down_forest(std::span<const Scalar> c, std::uint32_t m, bool collapse = false) {
  const auto n = static_cast<std::uint32_t>(c.size() - 1);
  TopDownForest<Scalar> f;
  f.nodes.resize(n);
  f.table.resize(m);
  std::uint32_t i = 0;
  std::vector<bool> owned(m, false);
  while (i < n) {
    const std::uint32_t g = cell(c[i], m);
    std::uint32_t hi = i;
    while (hi + 1 < n && cell(c[hi + 1], m) == g) ++hi;
    owned[g] = true;
    f.nodes[i].child[0] = rtf::NodeRef::leaf(i == 0 ? 0 : i - 1);
    f.nodes[i].child[1] = split_range(c, i, hi, f.nodes);
    f.table[g] = rtf::NodeRef::internal(i);
    const bool starts_cell = c[i] == Scalar(0) || cell(std::nextafter(c[i], Scalar(0)), m) < g;
    if (collapse && hi == i && starts_cell) f.table[g] = rtf::NodeRef::leaf(i);
    i = hi + 1;
  }
  for (std::uint32_t g = 0; g < m; ++g) {
    if (!owned[g]) f.table[g] = rtf::NodeRef::leaf(first_of_cell(c, g, m));
  }
  return f;
}

/// Expected number of bound probes of linear search started at first[g],
/// integrated exactly over xi in [0,1).
inline long double cutpoint_linear_expected_probes(std::span<const double> c, std::uint32_t m) {
  const auto n = static_cast<std::uint32_t>(c.size() - 1);
  long double expected = 0;
  for (std::uint32_t g = 0; g < m; ++g) {
    const long double a = static_cast<long double>(g) / m;
    const long double b = static_cast<long double>(g + 1) / m;
    const std::uint32_t first = first_of_cell(c, g, m);
    for (std::uint32_t r = first; r < n; ++r) {
      const long double lo = std::max<long double>(a, c[r]);
      const long double hi = std::min<long double>(b, c[r + 1]);
      if (hi > lo) expected += (hi - lo) * (r - first + 1);
      if (c[r + 1] >= b) break;
    }
  }
  return expected;
}

/// Measure of each index under an alias table: cell j contributes q_j/n to j
/// and (1 - q_j)/n to alias_j.
template <class Table>
std::vector<long double> alias_mass(const Table& table) {
  const std::size_t n = table.cells.size();
  std::vector<long double> mass(n, 0.0L);
  for (std::size_t j = 0; j < n; ++j) {
    const long double q = table.cells[j].threshold;
    mass[j] += q / n;
    mass[table.cells[j].alias] += (1.0L - q) / n;
  }
  return mass;
}

/// Random weights in several shapes: flat, wide dynamic range, sparse zeros,
/// dyadic, and a few dominant spikes.
inline std::vector<double> random_weights(std::mt19937_64& rng, std::uint32_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(n);
  switch (rng() % 5) {
    case 0:
      for (double& x : w) x = u(rng) + 1e-3;
      break;
    case 1:
      for (double& x : w) x = std::pow(10.0, u(rng) * 16 - 8);
      break;
    case 2:
      for (double& x : w) x = u(rng) < 0.3 ? 0.0 : u(rng);
      if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0; })) w[rng() % n] = 1;
      break;
    case 3:
      for (double& x : w) x = std::ldexp(1.0, -static_cast<int>(rng() % 20));
      break;
    default:
      for (double& x : w) x = u(rng) * 1e-4;
      for (int k = 0; k < 3; ++k) w[rng() % n] = 1 + u(rng);
      break;
  }
  return w;
}

}  // namespace oracle
