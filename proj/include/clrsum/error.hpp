#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clrsum {

enum class ErrorCode {
  InvalidArgument,
  DegenerateInput,
  EmptyConditioning,
  InsufficientData,
  NotSymmetric,
  DimensionMismatch,
  SingleClass,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable error category.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::EmptyConditioning: return "EmptyConditioning";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace clrsum
