#include "rtf/sequences.hpp"

#include <string>

#include "rtf/error.hpp"

namespace rtf {

namespace {

std::uint64_t reverse_bits(std::uint64_t v) noexcept {
  v = ((v >> 1) & 0x5555555555555555ull) | ((v & 0x5555555555555555ull) << 1);
  v = ((v >> 2) & 0x3333333333333333ull) | ((v & 0x3333333333333333ull) << 2);
  v = ((v >> 4) & 0x0F0F0F0F0F0F0F0Full) | ((v & 0x0F0F0F0F0F0F0F0Full) << 4);
  v = ((v >> 8) & 0x00FF00FF00FF00FFull) | ((v & 0x00FF00FF00FF00FFull) << 8);
  v = ((v >> 16) & 0x0000FFFF0000FFFFull) | ((v & 0x0000FFFF0000FFFFull) << 16);
  return (v >> 32) | (v << 32);
}

}  // namespace

double radical_inverse_base2(std::uint64_t i) noexcept {
  return static_cast<double>(reverse_bits(i) >> 11) * 0x1.0p-53;
}

Point2 hammersley(std::uint64_t i, std::uint64_t count) {
  if (i >= count) {
    throw Error(ErrorCode::IndexOutOfRange,
                "hammersley index " + std::to_string(i) + " out of range for " + std::to_string(count) + " points");
  }
  return {static_cast<double>(i) / static_cast<double>(count), radical_inverse_base2(i)};
}

std::optional<Point2> PointStream::next() {
  if (cursor_ >= count_) return std::nullopt;
  const std::uint64_t i = cursor_++;
  if (kind_ == Kind::hammersley) return rtf::hammersley(i, count_);
  const double x = rng_.next_double();
  return Point2{x, rng_.next_double()};
}

}  // namespace rtf
