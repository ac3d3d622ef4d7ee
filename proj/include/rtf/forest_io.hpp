#pragma once

// RTF1 binary layout, little-endian throughout:
//   "RTF1" | u32 n | u32 m | f64 C[0..n] | i32 table[m] | n x (i32 left, i32 right)
// Leaf references are stored as their complemented (negative) value.

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "rtf/radix_forest.hpp"

namespace rtf {

template <std::floating_point Scalar>
std::vector<std::byte> serialize(const RadixForest<Scalar>& forest);

/// Throws ParseError (with the byte offset) on a bad magic, truncation,
/// trailing bytes or an invalid CDF. References are not checked here.
RadixForest<double> deserialize(std::span<const std::byte> bytes);

void write_forest(const std::filesystem::path& path, const RadixForest<double>& forest);
RadixForest<double> read_forest(const std::filesystem::path& path);

std::vector<std::byte> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes);

extern template std::vector<std::byte> serialize(const RadixForest<float>&);
extern template std::vector<std::byte> serialize(const RadixForest<double>&);

}  // namespace rtf
