#pragma once

#include <optional>
#include <string>
#include <vector>

#include "personaprobe/app_model.hpp"

// Structured GUI snapshot: what the current screen presents right now, with
// live values and visibility flags. Produced by the simulator (or any other
// execution backend) and consumed by the perception pipeline and policies.

namespace pprobe {

struct SnapWidget {
    std::string id;
    WidgetKind kind = WidgetKind::kButton;
    std::string label;
    Bounds bounds;              // live bounds; input fields grow with content
    std::string live_value;     // field text, or "on"/"off" for toggles
    bool transient = false;
    bool hidden = false;        // revealed_by widget not activated yet
    bool core = false;
    bool interactable = false;  // by kind; hidden widgets keep their kind flag

    // Backend-visible metadata, carried so rule-based policies can reason
    // about structure the textual document does not expose.
    std::string revealed_by;
    std::string goto_target;    // first click-navigation target, if any
    std::optional<InputRule> input_rule;
};

struct RawGuiSnapshot {
    std::string screen_id;
    std::vector<SnapWidget> widgets;

    // Paging state of the screen's widget window.
    int page = 0;
    bool can_scroll_down = false;
    bool can_scroll_up = false;

    const SnapWidget* find(std::string_view widget_id) const {
        for (const auto& w : widgets) {
            if (w.id == widget_id) return &w;
        }
        return nullptr;
    }
};

}  // namespace pprobe
