#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>

namespace rtf {

/// Guide-table cell of a value in [0,1]: floor(x*m), clamped to m-1.
/// The one place a cell index is computed, so that construction and lookup
/// agree on every rounding decision.
template <std::floating_point Scalar>
inline std::uint32_t cell_of(Scalar x, std::uint32_t m) noexcept {
  const auto c = static_cast<std::uint64_t>(x * static_cast<Scalar>(m));
  return c >= m ? m - 1 : static_cast<std::uint32_t>(c);
}

/// Smallest representable x with cell_of(x, m) >= g.
template <std::floating_point Scalar>
inline Scalar cell_start(std::uint32_t g, std::uint32_t m) noexcept {
  if (g == 0) return Scalar(0);
  Scalar x = static_cast<Scalar>(g) / static_cast<Scalar>(m);
  while (x > Scalar(0) && cell_of(x, m) >= g) x = std::nextafter(x, Scalar(0));
  while (cell_of(x, m) < g) x = std::nextafter(x, Scalar(2));
  return x;
}

}  // namespace rtf
