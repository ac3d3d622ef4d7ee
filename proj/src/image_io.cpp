#include "rtf/image_io.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <string>

#include "rtf/forest_io.hpp"

namespace rtf {

namespace {

/// Netpbm-style header tokens: whitespace separated, '#' comments to end of line.
class HeaderScanner {
 public:
  explicit HeaderScanner(std::span<const std::byte> bytes) : bytes_(bytes) {}

  std::string token() {
    skip_space_and_comments();
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !is_space(at(pos_))) ++pos_;
    if (start == pos_) throw Error(ErrorCode::ParseError, "unexpected end of input", pos_);
    return std::string(reinterpret_cast<const char*>(bytes_.data()) + start, pos_ - start);
  }

  std::uint64_t unsigned_token(const char* what) {
    const std::size_t at_offset = next_token_offset();
    const std::string t = token();
    std::uint64_t v = 0;
    for (const char ch : t) {
      if (!std::isdigit(static_cast<unsigned char>(ch)) || v > (1ull << 40)) {
        throw Error(ErrorCode::ParseError, std::string("bad ") + what + " '" + t + "'", at_offset);
      }
      v = v * 10 + static_cast<std::uint64_t>(ch - '0');
    }
    return v;
  }

  double real_token(const char* what) {
    const std::size_t at_offset = next_token_offset();
    const std::string t = token();
    try {
      std::size_t used = 0;
      const double v = std::stod(t, &used);
      if (used == t.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::ParseError, std::string("bad ") + what + " '" + t + "'", at_offset);
  }

  /// Consumes the single whitespace byte that ends a binary header.
  void end_of_header() {
    if (pos_ >= bytes_.size() || !is_space(at(pos_))) {
      throw Error(ErrorCode::ParseError, "missing whitespace after header", pos_);
    }
    ++pos_;
  }

  std::size_t pos() const noexcept { return pos_; }

 private:
  static bool is_space(char c) noexcept { return std::isspace(static_cast<unsigned char>(c)) != 0; }
  char at(std::size_t i) const noexcept { return static_cast<char>(bytes_[i]); }

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (is_space(at(pos_))) {
        ++pos_;
      } else if (at(pos_) == '#') {
        while (pos_ < bytes_.size() && at(pos_) != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t next_token_offset() {
    skip_space_and_comments();
    return pos_;
  }

  std::span<const std::byte> bytes_;
  std::size_t pos_ = 0;
};

std::string magic_of(std::span<const std::byte> bytes) {
  if (bytes.size() < 2) return {};
  return {static_cast<char>(bytes[0]), static_cast<char>(bytes[1])};
}

void check_size(std::uint64_t width, std::uint64_t height, std::size_t offset) {
  if (width == 0 || height == 0 || width * height > (1ull << 31)) {
    throw Error(ErrorCode::ParseError, "unsupported image size", offset);
  }
}

}  // namespace

Density2D parse_pgm(std::span<const std::byte> bytes) {
  const std::string magic = magic_of(bytes);
  if (magic != "P2" && magic != "P5") {
    throw Error(ErrorCode::UnsupportedFormat, "not a grayscale PGM (magic '" + magic + "')");
  }
  HeaderScanner in(bytes);
  in.token();
  const std::uint64_t width = in.unsigned_token("width");
  const std::uint64_t height = in.unsigned_token("height");
  check_size(width, height, in.pos());
  const std::uint64_t maxval = in.unsigned_token("maxval");
  if (maxval == 0 || maxval > 65535) throw Error(ErrorCode::ParseError, "maxval out of range", in.pos());

  const std::size_t count = width * height;
  std::vector<double> values(count);
  if (magic == "P2") {
    for (double& v : values) {
      const std::uint64_t sample = in.unsigned_token("pixel");
      if (sample > maxval) throw Error(ErrorCode::ParseError, "pixel exceeds maxval", in.pos());
      v = static_cast<double>(sample);
    }
  } else {
    in.end_of_header();
    const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
    const std::size_t start = in.pos();
    if (bytes.size() - start < count * bytes_per_sample) {
      throw Error(ErrorCode::ParseError, "truncated pixel data", bytes.size());
    }
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t at = start + i * bytes_per_sample;
      std::uint32_t sample = std::to_integer<std::uint32_t>(bytes[at]);
      if (bytes_per_sample == 2) sample = (sample << 8) | std::to_integer<std::uint32_t>(bytes[at + 1]);
      values[i] = sample;
    }
  }
  return Density2D(static_cast<std::uint32_t>(width), static_cast<std::uint32_t>(height), std::move(values));
}

Density2D parse_pfm(std::span<const std::byte> bytes) {
  const std::string magic = magic_of(bytes);
  if (magic == "PF") throw Error(ErrorCode::UnsupportedFormat, "color PFM is not supported");
  if (magic != "Pf") throw Error(ErrorCode::UnsupportedFormat, "not a grayscale PFM (magic '" + magic + "')");
  HeaderScanner in(bytes);
  in.token();
  const std::uint64_t width = in.unsigned_token("width");
  const std::uint64_t height = in.unsigned_token("height");
  check_size(width, height, in.pos());
  const double scale = in.real_token("scale");
  if (scale == 0 || !std::isfinite(scale)) throw Error(ErrorCode::ParseError, "scale must be nonzero", in.pos());
  in.end_of_header();

  const bool little_endian = scale < 0;
  const std::size_t start = in.pos();
  const std::size_t count = width * height;
  if (bytes.size() - start < count * 4) throw Error(ErrorCode::ParseError, "truncated pixel data", bytes.size());

  std::vector<double> values(count);
  for (std::uint64_t file_row = 0; file_row < height; ++file_row) {
    const std::uint64_t row = height - 1 - file_row;
    for (std::uint64_t col = 0; col < width; ++col) {
      const std::size_t at = start + 4 * (file_row * width + col);
      std::uint32_t raw = 0;
      for (int k = 0; k < 4; ++k) {
        const auto b = std::to_integer<std::uint32_t>(bytes[at + static_cast<std::size_t>(k)]);
        raw |= little_endian ? b << (8 * k) : b << (8 * (3 - k));
      }
      const double v = std::bit_cast<float>(raw) * std::fabs(scale);
      if (!std::isfinite(v) || v < 0) throw Error(ErrorCode::ParseError, "pixel is negative or not finite", at);
      values[row * width + col] = v;
    }
  }
  return Density2D(static_cast<std::uint32_t>(width), static_cast<std::uint32_t>(height), std::move(values));
}

std::vector<std::byte> encode_pfm(const Density2D& density, bool little_endian) {
  const std::string header = "Pf\n" + std::to_string(density.width) + " " + std::to_string(density.height) + "\n" +
                             (little_endian ? "-1.0" : "1.0") + "\n";
  std::vector<std::byte> out(header.size());
  std::memcpy(out.data(), header.data(), header.size());
  for (std::uint32_t file_row = 0; file_row < density.height; ++file_row) {
    const std::uint32_t row = density.height - 1 - file_row;
    for (std::uint32_t col = 0; col < density.width; ++col) {
      const auto raw = std::bit_cast<std::uint32_t>(static_cast<float>(density.at(row, col)));
      for (int k = 0; k < 4; ++k) {
        const int shift = little_endian ? 8 * k : 8 * (3 - k);
        out.push_back(static_cast<std::byte>((raw >> shift) & 0xFF));
      }
    }
  }
  return out;
}

Density2D load_pgm(const std::filesystem::path& path) { return parse_pgm(read_file(path)); }
Density2D load_pfm(const std::filesystem::path& path) { return parse_pfm(read_file(path)); }

Density2D load_image(const std::filesystem::path& path) {
  const std::vector<std::byte> bytes = read_file(path);
  const std::string magic = magic_of(bytes);
  if (magic == "Pf" || magic == "PF") return parse_pfm(bytes);
  return parse_pgm(bytes);
}

}  // namespace rtf
