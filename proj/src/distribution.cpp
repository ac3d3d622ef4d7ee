#include "rtf/distribution.hpp"

#include <cmath>
#include <string>

namespace rtf {

Pmf::Pmf(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw Error(ErrorCode::InvalidArgument, "pmf must have at least one weight");
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!std::isfinite(w)) {
      throw Error(ErrorCode::InvalidArgument, "weight " + std::to_string(i) + " is not finite");
    }
    if (w < 0) throw Error(ErrorCode::NegativeWeight, "weight " + std::to_string(i) + " is negative");
    total_ += w;
  }
  if (total_ == 0) throw Error(ErrorCode::AllZeroWeights, "all weights are zero");
}

template <std::floating_point Scalar>
Cdf<Scalar> Cdf<Scalar>::from_bounds(std::vector<Scalar> bounds) {
  if (bounds.size() < 2) throw Error(ErrorCode::InvalidCdf, "cdf needs at least two bounds");
  if (bounds.front() != Scalar(0)) throw Error(ErrorCode::InvalidCdf, "cdf must start at 0");
  if (bounds.back() != Scalar(1)) throw Error(ErrorCode::InvalidCdf, "cdf must end at 1");
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    if (!(bounds[i] <= bounds[i + 1])) {
      throw Error(ErrorCode::InvalidCdf, "cdf decreases at bound " + std::to_string(i + 1));
    }
  }
  return Cdf(std::move(bounds));
}

template <std::floating_point Scalar>
Cdf<Scalar> build_cdf(const Pmf& pmf) {
  const auto weights = pmf.weights();
  const long double total = pmf.total();
  std::vector<Scalar> bounds(weights.size() + 1);
  long double running = 0;
  bounds[0] = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    running += weights[i];
    bounds[i + 1] = static_cast<Scalar>(running / total);
  }
  bounds.back() = 1;
  return Cdf<Scalar>::from_bounds(std::move(bounds));
}

CompactedPmf compact(const Pmf& pmf) {
  std::vector<double> weights;
  std::vector<std::uint32_t> remap;
  const auto src = pmf.weights();
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i] > 0) {
      weights.push_back(src[i]);
      remap.push_back(static_cast<std::uint32_t>(i));
    }
  }
  return {Pmf(std::move(weights)), std::move(remap)};
}

template <std::floating_point Scalar>
CompactedCdf<Scalar> compact_cdf(const Cdf<Scalar>& cdf) {
  const auto c = cdf.bounds();
  std::vector<Scalar> bounds{Scalar(0)};
  std::vector<std::uint32_t> remap;
  for (std::size_t i = 0; i < cdf.intervals(); ++i) {
    if (c[i] < c[i + 1]) {
      bounds.push_back(c[i + 1]);
      remap.push_back(static_cast<std::uint32_t>(i));
    }
  }
  return {Cdf<Scalar>::from_bounds(std::move(bounds)), std::move(remap)};
}

template <std::floating_point Scalar>
bool is_strictly_increasing(const Cdf<Scalar>& cdf) noexcept {
  const auto c = cdf.bounds();
  for (std::size_t i = 0; i + 1 < c.size(); ++i) {
    if (!(c[i] < c[i + 1])) return false;
  }
  return true;
}

template <std::floating_point Scalar>
CompactedCdf<Scalar> build_strict_cdf(const Pmf& pmf) {
  CompactedPmf nonzero = compact(pmf);
  CompactedCdf<Scalar> strict = compact_cdf(build_cdf<Scalar>(nonzero.pmf));
  for (std::uint32_t& index : strict.remap) index = nonzero.remap[index];
  return strict;
}

template class Cdf<float>;
template class Cdf<double>;
template Cdf<float> build_cdf<float>(const Pmf&);
template Cdf<double> build_cdf<double>(const Pmf&);
template CompactedCdf<float> compact_cdf(const Cdf<float>&);
template CompactedCdf<double> compact_cdf(const Cdf<double>&);
template bool is_strictly_increasing(const Cdf<float>&) noexcept;
template bool is_strictly_increasing(const Cdf<double>&) noexcept;
template CompactedCdf<float> build_strict_cdf<float>(const Pmf&);
template CompactedCdf<double> build_strict_cdf<double>(const Pmf&);

}  // namespace rtf
