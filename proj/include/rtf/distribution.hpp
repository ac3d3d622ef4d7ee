#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rtf/error.hpp"

namespace rtf {

/// Unnormalized discrete masses p_0..p_{n-1}. Nonnegative, at least one
/// positive entry, n >= 1.
class Pmf {
 public:
  explicit Pmf(std::vector<double> weights);

  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  long double total() const noexcept { return total_; }
  /// Normalized mass of interval i.
  double probability(std::size_t i) const { return static_cast<double>(weights_[i] / total_); }

 private:
  std::vector<double> weights_;
  long double total_ = 0;
};

/// Interval lower bounds C[0..n]; interval i is [C[i], C[i+1]).
/// C[0] = 0 and C[n] = 1 exactly, non-decreasing.
template <std::floating_point Scalar>
class Cdf {
 public:
  using scalar_type = Scalar;

  /// Validates the bound invariants and throws InvalidCdf otherwise.
  static Cdf from_bounds(std::vector<Scalar> bounds);

  std::span<const Scalar> bounds() const noexcept { return bounds_; }
  std::size_t intervals() const noexcept { return bounds_.size() - 1; }
  Scalar operator[](std::size_t i) const noexcept { return bounds_[i]; }
  Scalar width(std::size_t i) const noexcept { return bounds_[i + 1] - bounds_[i]; }

 private:
  explicit Cdf(std::vector<Scalar> bounds) : bounds_(std::move(bounds)) {}
  std::vector<Scalar> bounds_;
};

/// Running sum accumulated in long double, divided by the total, with the
/// last bound overwritten by exactly 1.
template <std::floating_point Scalar = double>
Cdf<Scalar> build_cdf(const Pmf& pmf);

struct CompactedPmf {
  Pmf pmf;
  /// remap[k] = original index of compacted interval k.
  std::vector<std::uint32_t> remap;
};

/// Drops zero weights.
CompactedPmf compact(const Pmf& pmf);

template <std::floating_point Scalar>
struct CompactedCdf {
  Cdf<Scalar> cdf;
  std::vector<std::uint32_t> remap;
};

/// Drops zero-width intervals (C[i] == C[i+1]). Such intervals can never be
/// selected by an inverse-CDF lookup, so remapping the result of a search on
/// the compacted CDF reproduces the search on the original one exactly.
template <std::floating_point Scalar>
CompactedCdf<Scalar> compact_cdf(const Cdf<Scalar>& cdf);

template <std::floating_point Scalar>
bool is_strictly_increasing(const Cdf<Scalar>& cdf) noexcept;

/// compact + build_cdf + compact_cdf with the two remaps composed: a
/// strictly increasing CDF whose interval k stands for original index remap[k].
template <std::floating_point Scalar = double>
CompactedCdf<Scalar> build_strict_cdf(const Pmf& pmf);

struct Histogram {
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  explicit Histogram(std::size_t n) : counts(n, 0) {}
  void add(std::size_t i) {
    ++counts[i];
    ++total;
  }
};

extern template class Cdf<float>;
extern template class Cdf<double>;
extern template Cdf<float> build_cdf<float>(const Pmf&);
extern template Cdf<double> build_cdf<double>(const Pmf&);
extern template CompactedCdf<float> compact_cdf(const Cdf<float>&);
extern template CompactedCdf<double> compact_cdf(const Cdf<double>&);
extern template bool is_strictly_increasing(const Cdf<float>&) noexcept;
extern template bool is_strictly_increasing(const Cdf<double>&) noexcept;
extern template CompactedCdf<float> build_strict_cdf<float>(const Pmf&);
extern template CompactedCdf<double> build_strict_cdf<double>(const Pmf&);

}  // namespace rtf
