#pragma once

#include <filesystem>
#include <span>

#include "rtf/sampler2d.hpp"

namespace rtf {

/// Grayscale PGM, ASCII (P2) or binary (P5, 8- or 16-bit big-endian).
/// Values are the raw pixel intensities.
Density2D parse_pgm(std::span<const std::byte> bytes);
Density2D load_pgm(const std::filesystem::path& path);

/// Grayscale PFM ("Pf"). A negative scale means little-endian floats; the
/// magnitude multiplies every value. Rows are stored bottom-up in the file
/// and returned top-down.
Density2D parse_pfm(std::span<const std::byte> bytes);
Density2D load_pfm(const std::filesystem::path& path);

/// Dispatches on the magic number.
Density2D load_image(const std::filesystem::path& path);

std::vector<std::byte> encode_pfm(const Density2D& density, bool little_endian = true);

}  // namespace rtf
