#pragma once

#include <stdexcept>
#include <string>

namespace pprobe {

// Stable error codes shared by the C++ core and the C API surface.
enum class ErrorCode {
    kNone = 0,
    kInvalidArgument,
    kMalformedPersonaCode,
    kUnknownAgentName,
    kSchemaViolation,
    kDanglingReference,
    kUnknownWidget,
    kHiddenWidget,
    kSessionCrashed,
    kNoActionableWidget,
    kPolicyFailure,
    kTargetOutOfRange,
    kBackendFailure,
    kEmptyPath,
    kZeroVector,
    kInsufficientPaths,
    kConfigError,
    kIoError,
    kRuntimeError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace pprobe
