#pragma once

#include <stdexcept>
#include <string>

namespace hyg {

/// Error categories shared by the core and the C API status codes.
enum class ErrorKind {
  kMalformedInput = 1,
  kCapability = 2,
  kHorizon = 3,
  kDivergence = 4,
  kNumerical = 5,
  kEmptySupport = 6,
  kConfig = 7,
  kInsufficientDepth = 8,
  kPrecondition = 9,
  kUnderSampled = 10,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::kMalformedInput: return "malformed-input";
    case ErrorKind::kCapability: return "capability";
    case ErrorKind::kHorizon: return "horizon";
    case ErrorKind::kDivergence: return "divergence";
    case ErrorKind::kNumerical: return "numerical";
    case ErrorKind::kEmptySupport: return "empty-support";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kInsufficientDepth: return "insufficient-depth";
    case ErrorKind::kPrecondition: return "precondition";
    case ErrorKind::kUnderSampled: return "under-sampled";
  }
  return "unknown";
}

}  // namespace hyg
