#include "personaprobe/error.hpp"

namespace pprobe {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::kNone: return "none";
        case ErrorCode::kInvalidArgument: return "invalid_argument";
        case ErrorCode::kMalformedPersonaCode: return "malformed_persona_code";
        case ErrorCode::kUnknownAgentName: return "unknown_agent_name";
        case ErrorCode::kSchemaViolation: return "schema_violation";
        case ErrorCode::kDanglingReference: return "dangling_reference";
        case ErrorCode::kUnknownWidget: return "unknown_widget";
        case ErrorCode::kHiddenWidget: return "hidden_widget";
        case ErrorCode::kSessionCrashed: return "session_crashed";
        case ErrorCode::kNoActionableWidget: return "no_actionable_widget";
        case ErrorCode::kPolicyFailure: return "policy_failure";
        case ErrorCode::kTargetOutOfRange: return "target_out_of_range";
        case ErrorCode::kBackendFailure: return "backend_failure";
        case ErrorCode::kEmptyPath: return "empty_path";
        case ErrorCode::kZeroVector: return "zero_vector";
        case ErrorCode::kInsufficientPaths: return "insufficient_paths";
        case ErrorCode::kConfigError: return "config_error";
        case ErrorCode::kIoError: return "io_error";
        case ErrorCode::kRuntimeError: return "runtime_error";
    }
    return "unknown";
}

}  // namespace pprobe
