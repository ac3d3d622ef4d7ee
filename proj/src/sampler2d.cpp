#include "rtf/sampler2d.hpp"

#include <cmath>
#include <string>

namespace rtf {

namespace {

/// Position of x inside [lo, hi) mapped to [0,1).
double rescale(double x, double lo, double hi) noexcept {
  const double t = (x - lo) / (hi - lo);
  constexpr double kBelowOne = 0x1.fffffffffffffp-1;
  return t < 0 ? 0 : (t < 1 ? t : kBelowOne);
}

}  // namespace

Density2D::Density2D(std::uint32_t width_, std::uint32_t height_, std::vector<double> values_)
    : width(width_), height(height_), values(std::move(values_)) {
  if (width == 0 || height == 0) throw Error(ErrorCode::InvalidArgument, "density needs a positive size");
  if (values.size() != std::size_t{width} * height) {
    throw Error(ErrorCode::LengthMismatch, "density has " + std::to_string(values.size()) + " values for " +
                                               std::to_string(width) + "x" + std::to_string(height));
  }
  for (const double v : values) {
    if (!std::isfinite(v) || v < 0) throw Error(ErrorCode::NegativeWeight, "density values must be finite and >= 0");
  }
}

Density2D Density2D::transposed() const {
  std::vector<double> out(values.size());
  for (std::uint32_t r = 0; r < height; ++r) {
    for (std::uint32_t c = 0; c < width; ++c) out[std::size_t{c} * height + r] = at(r, c);
  }
  return Density2D(height, width, std::move(out));
}

ForestView<double> Sampler2D::conditional(std::uint32_t k) const noexcept {
  const std::uint32_t first = leaf_offsets_[k];
  const std::uint32_t count = leaf_offsets_[k + 1] - first;
  return {std::span<const double>(bounds_).subspan(first + k, count + 1),
          std::span<const ForestNode>(rows_.nodes).subspan(first, count),
          std::span<const NodeRef>(rows_.table).subspan(std::size_t{k} * row_cells_, row_cells_)};
}

std::span<const std::uint32_t> Sampler2D::column_remap(std::uint32_t k) const noexcept {
  return std::span<const std::uint32_t>(col_remap_).subspan(leaf_offsets_[k], leaf_offsets_[k + 1] - leaf_offsets_[k]);
}

Sample2D Sampler2D::sample_untransposed(double xi1, double xi2) const noexcept {
  const std::uint32_t row = marginal_.sample(xi1);
  const auto& cm = marginal_.cdf();
  const ForestView<double> cond = conditional(row);
  const std::uint32_t col = cond.sample(xi2);
  return {row_remap_[row], column_remap(row)[col], rescale(xi2, cond.cdf[col], cond.cdf[col + 1]),
          rescale(xi1, cm[row], cm[row + 1])};
}

Sample2D Sampler2D::sample(double xi1, double xi2) const noexcept {
  const Sample2D s = sample_untransposed(xi1, xi2);
  if (!transpose_) return s;
  return {s.col, s.row, s.v, s.u};
}

Sampler2D build_2d(const Density2D& density, const Sampler2DOptions& options) {
  if (options.transpose) {
    Sampler2DOptions inner = options;
    inner.transpose = false;
    Sampler2D sampler = build_2d(density.transposed(), inner);
    sampler.transpose_ = true;
    return sampler;
  }

  std::vector<double> row_sums(density.height, 0.0);
  bool any_positive = false;
  for (std::uint32_t r = 0; r < density.height; ++r) {
    long double sum = 0;
    for (std::uint32_t c = 0; c < density.width; ++c) sum += density.at(r, c);
    row_sums[r] = static_cast<double>(sum);
    any_positive = any_positive || sum > 0;
  }
  if (!any_positive) throw Error(ErrorCode::AllZeroDensity, "density has no positive value");

  CompactedCdf<double> marginal = build_strict_cdf<double>(Pmf(std::move(row_sums)));
  const auto rows = static_cast<std::uint32_t>(marginal.cdf.intervals());
  const std::uint32_t marginal_cells = options.marginal_cells ? options.marginal_cells : rows;

  Sampler2D sampler(build_forest(marginal.cdf, marginal_cells, options.forest));
  sampler.row_remap_ = std::move(marginal.remap);
  sampler.row_cells_ = options.row_cells ? options.row_cells : density.width;
  sampler.leaf_offsets_.push_back(0);
  for (const std::uint32_t r : sampler.row_remap_) {
    const auto first = density.values.begin() + std::ptrdiff_t{r} * density.width;
    CompactedCdf<double> row = build_strict_cdf<double>(Pmf(std::vector<double>(first, first + density.width)));
    const auto b = row.cdf.bounds();
    sampler.bounds_.insert(sampler.bounds_.end(), b.begin(), b.end());
    sampler.col_remap_.insert(sampler.col_remap_.end(), row.remap.begin(), row.remap.end());
    sampler.leaf_offsets_.push_back(sampler.leaf_offsets_.back() + static_cast<std::uint32_t>(row.remap.size()));
  }
  sampler.rows_ = build_forest_segments<double>(sampler.bounds_, sampler.leaf_offsets_, sampler.row_cells_, options.forest);
  return sampler;
}

AliasSampler2D::AliasSampler2D(const Density2D& density) : marginal_{}, rows_(density.height) {
  std::vector<double> row_sums(density.height, 0.0);
  for (std::uint32_t r = 0; r < density.height; ++r) {
    long double sum = 0;
    for (std::uint32_t c = 0; c < density.width; ++c) sum += density.at(r, c);
    row_sums[r] = static_cast<double>(sum);
    if (sum > 0) {
      const auto first = density.values.begin() + std::ptrdiff_t{r} * density.width;
      rows_[r] = build_alias_table(Pmf(std::vector<double>(first, first + density.width)));
    }
  }
  bool any_positive = false;
  for (const double s : row_sums) any_positive = any_positive || s > 0;
  if (!any_positive) throw Error(ErrorCode::AllZeroDensity, "density has no positive value");
  marginal_ = build_alias_table(Pmf(std::move(row_sums)));
}

Sample2D AliasSampler2D::sample(double xi1, double xi2) const noexcept {
  const std::uint32_t row = sample_alias(marginal_, xi1);
  return {row, sample_alias(rows_[row], xi2), 0, 0};
}

}  // namespace rtf
