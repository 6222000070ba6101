#include "personaprobe/decision_types.hpp"

namespace pprobe {

std::string_view expected_effect_name(ExpectedEffect e) {
    switch (e) {
        case ExpectedEffect::kScreenChange: return "screen_change";
        case ExpectedEffect::kValueChange: return "value_change";
        case ExpectedEffect::kRevealWidget: return "reveal_widget";
        case ExpectedEffect::kNoneExpected: return "none_expected";
    }
    return "none_expected";
}

ExpectedEffect parse_expected_effect(std::string_view name) {
    if (name == "screen_change") return ExpectedEffect::kScreenChange;
    if (name == "value_change") return ExpectedEffect::kValueChange;
    if (name == "reveal_widget") return ExpectedEffect::kRevealWidget;
    if (name == "none_expected") return ExpectedEffect::kNoneExpected;
    raise(ErrorCode::kInvalidArgument,
          "unknown expected effect: \"" + std::string(name) + "\"");
}

}  // namespace pprobe
