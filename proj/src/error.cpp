#include "rtf/error.hpp"

namespace rtf {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::AllZeroWeights: return "AllZeroWeights";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::InvalidCdf: return "InvalidCdf";
    case ErrorCode::NotStrictlyIncreasing: return "NotStrictlyIncreasing";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::EmptyTrace: return "EmptyTrace";
    case ErrorCode::EmptyHistogram: return "EmptyHistogram";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::AllZeroDensity: return "AllZeroDensity";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace rtf
