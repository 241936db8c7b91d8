#include "ccl/error.hpp"

namespace ccl {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParam: return "InvalidParam";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::ZeroSpectralRadius: return "ZeroSpectralRadius";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidAperture: return "InvalidAperture";
    case ErrorCode::LambdaOutOfRange: return "LambdaOutOfRange";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::ZeroVarianceTarget: return "ZeroVarianceTarget";
    case ErrorCode::NotSingleChannel: return "NotSingleChannel";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace ccl
