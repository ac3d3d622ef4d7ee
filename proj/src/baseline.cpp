#include "rtf/baseline.hpp"

#include <algorithm>
#include <cmath>

namespace rtf {

template <std::floating_point Scalar>
GuideTable build_guide_table(const Cdf<Scalar>& cdf, std::uint32_t m) {
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "guide table needs at least one cell");
  const auto c = cdf.bounds();
  const auto n = static_cast<std::uint32_t>(cdf.intervals());
  GuideTable table;
  table.first.resize(m);
  for (std::uint32_t g = 0; g < m; ++g) {
    table.first[g] = detail::bisect<Scalar>(c, cell_start<Scalar>(g, m), 0u, n - 1, nullptr);
  }
  return table;
}

AliasTable build_alias_table(const Pmf& pmf) {
  const auto weights = pmf.weights();
  const std::size_t n = weights.size();
  const long double scale = static_cast<long double>(n) / pmf.total();

  std::vector<long double> scaled(n);
  std::vector<std::uint32_t> small;
  std::vector<std::uint32_t> large;
  AliasTable table;
  table.cells.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * scale;
    table.cells[i] = {1.0, i};
    if (scaled[i] < 1) {
      small.push_back(i);
    } else if (scaled[i] > 1) {
      large.push_back(i);
    }
  }

  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    table.cells[s] = {static_cast<double>(scaled[s]), l};
    scaled[l] -= 1 - scaled[s];
    if (scaled[l] < 1) {
      large.pop_back();
      small.push_back(l);
    } else if (scaled[l] == 1) {
      large.pop_back();
    }
  }
  // Whatever is left differs from 1 only by rounding drift; those cells keep
  // threshold 1 and point to themselves, as initialized.
  return table;
}

std::vector<double> alias_measure(const AliasTable& table) {
  const std::size_t n = table.cells.size();
  std::vector<long double> measure(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    const AliasCell& cell = table.cells[j];
    measure[j] += cell.threshold;
    measure[cell.alias] += 1 - static_cast<long double>(cell.threshold);
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<double>(measure[i] / n);
  return out;
}

template GuideTable build_guide_table(const Cdf<float>&, std::uint32_t);
template GuideTable build_guide_table(const Cdf<double>&, std::uint32_t);

}  // namespace rtf
