#pragma once

// Two-dimensional piecewise-constant sampling: a forest over the row sums
// selects the row, a per-row forest selects the column, and the residual
// positions inside both intervals become the sub-pixel offsets.

#include <cstdint>
#include <span>
#include <vector>

#include "rtf/baseline.hpp"
#include "rtf/radix_forest.hpp"

namespace rtf {

/// Row-major nonnegative grid.
struct Density2D {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
  std::vector<double> values;

  Density2D(std::uint32_t width, std::uint32_t height, std::vector<double> values);

  double at(std::uint32_t row, std::uint32_t col) const noexcept { return values[std::size_t{row} * width + col]; }
  Density2D transposed() const;
};

struct Sample2D {
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  /// Sub-pixel position along the row (u) and column (v), in [0,1).
  double u = 0;
  double v = 0;
};

struct Sampler2DOptions {
  /// Guide-table cells of the marginal; 0 uses the number of nonzero rows.
  std::uint32_t marginal_cells = 0;
  /// Guide-table cells of every row; 0 uses the grid width.
  std::uint32_t row_cells = 0;
  /// Select the column first, then the row within it.
  bool transpose = false;
  ForestOptions forest{};
};

class Sampler2D {
 public:
  Sample2D sample(double xi1, double xi2) const noexcept;

  const RadixForest<double>& marginal() const noexcept { return marginal_; }
  /// Original row of every marginal interval.
  std::span<const std::uint32_t> row_remap() const noexcept { return row_remap_; }
  std::uint32_t conditional_count() const noexcept { return static_cast<std::uint32_t>(leaf_offsets_.size() - 1); }
  /// Forest of the k-th nonzero row.
  ForestView<double> conditional(std::uint32_t k) const noexcept;
  /// Original column of every leaf of the k-th nonzero row.
  std::span<const std::uint32_t> column_remap(std::uint32_t k) const noexcept;
  /// Flattened per-row bounds and the leaf offsets they were built from.
  std::span<const double> conditional_bounds() const noexcept { return bounds_; }
  std::span<const std::uint32_t> leaf_offsets() const noexcept { return leaf_offsets_; }
  std::uint32_t row_cells() const noexcept { return row_cells_; }
  bool transposed() const noexcept { return transpose_; }

 private:
  friend Sampler2D build_2d(const Density2D&, const Sampler2DOptions&);
  Sampler2D(RadixForest<double> marginal) : marginal_(std::move(marginal)) {}

  Sample2D sample_untransposed(double xi1, double xi2) const noexcept;

  RadixForest<double> marginal_;
  std::vector<std::uint32_t> row_remap_;
  std::vector<double> bounds_;
  std::vector<std::uint32_t> leaf_offsets_;
  std::vector<std::uint32_t> col_remap_;
  ForestArrays rows_;
  std::uint32_t row_cells_ = 0;
  bool transpose_ = false;
};

/// All row forests are built in one pass over the flattened leaves.
/// Throws AllZeroDensity when no value is positive.
Sampler2D build_2d(const Density2D& density, const Sampler2DOptions& options = {});

/// Alias-method counterpart (marginal alias table plus one per row), used as
/// the non-monotonic baseline in convergence experiments.
class AliasSampler2D {
 public:
  explicit AliasSampler2D(const Density2D& density);

  /// Returns (row, col) with zero sub-pixel offsets.
  Sample2D sample(double xi1, double xi2) const noexcept;

 private:
  AliasTable marginal_;
  std::vector<AliasTable> rows_;
};

}  // namespace rtf
