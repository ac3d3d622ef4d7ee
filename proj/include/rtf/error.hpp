#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rtf {

enum class ErrorCode {
  AllZeroWeights,
  NegativeWeight,
  InvalidCdf,
  NotStrictlyIncreasing,
  TooLarge,
  EmptyTrace,
  EmptyHistogram,
  LengthMismatch,
  IndexOutOfRange,
  AllZeroDensity,
  ParseError,
  UnsupportedFormat,
  IoError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. `code()` identifies the condition,
/// `byte_offset()` is set for parse errors of binary/text inputs.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::size_t> byte_offset = std::nullopt)
      : std::runtime_error(what), code_(code), byte_offset_(byte_offset) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> byte_offset() const noexcept { return byte_offset_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> byte_offset_;
};

}  // namespace rtf
