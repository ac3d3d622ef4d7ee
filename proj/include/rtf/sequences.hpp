#pragma once

#include <cstdint>
#include <optional>

namespace rtf {

struct Point2 {
  double x = 0;
  double y = 0;
};

/// Van der Corput radical inverse in base 2 (bit reversal of i as a binary
/// fraction). Exact for i < 2^53.
double radical_inverse_base2(std::uint64_t i) noexcept;

/// Point i of the N-point two-dimensional Hammersley set: (i/N, radical inverse of i).
Point2 hammersley(std::uint64_t i, std::uint64_t count);

/// SplitMix64. Doubles take the top 53 bits of each output.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    std::uint64_t z = (state_ += kGamma);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0,1).
  double next_double() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Copy positioned `offset` draws ahead, for handing disjoint stretches of
  /// one stream to parallel workers.
  SplitMix64 advanced(std::uint64_t offset) const noexcept { return SplitMix64(state_ + offset * kGamma); }

 private:
  std::uint64_t state_;
};

/// Finite source of 2D points: a Hammersley set or `count` PRNG pairs.
class PointStream {
 public:
  enum class Kind { hammersley, prng };

  static PointStream hammersley(std::uint64_t count) { return PointStream(Kind::hammersley, count, 0); }
  static PointStream prng(std::uint64_t seed, std::uint64_t count) { return PointStream(Kind::prng, count, seed); }

  Kind kind() const noexcept { return kind_; }
  std::uint64_t size() const noexcept { return count_; }
  std::uint64_t cursor() const noexcept { return cursor_; }

  std::optional<Point2> next();

 private:
  PointStream(Kind kind, std::uint64_t count, std::uint64_t seed) : kind_(kind), count_(count), rng_(seed) {}

  Kind kind_;
  std::uint64_t count_;
  std::uint64_t cursor_ = 0;
  SplitMix64 rng_;
};

}  // namespace rtf
