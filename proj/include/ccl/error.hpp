#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ccl {

enum class ErrorCode {
  InvalidParam,
  DimensionMismatch,
  NotSquare,
  ZeroSpectralRadius,
  DegenerateInput,
  SingularSystem,
  SeriesTooShort,
  IndexOutOfRange,
  InvalidAperture,
  LambdaOutOfRange,
  ShapeMismatch,
  ZeroVarianceTarget,
  NotSingleChannel,
  NonFinite,
  IoError,
  ParseError,
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure in the library surfaces as this type; `code()` is stable and
// is what the CLI prints on its machine-readable error line.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace ccl
