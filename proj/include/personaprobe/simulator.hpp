#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "personaprobe/app_model.hpp"
#include "personaprobe/snapshot.hpp"

// Deterministic execution of declarative app models. One SimulatorState is a
// single session; identical (model, seed, event sequence) replays identical
// outcomes byte-for-byte.

namespace pprobe {

// A concrete interaction addressed by widget id (the execution backend maps
// screen coordinates back to ids via hit-testing before calling apply_event).
struct GuiEvent {
    ActionType action = ActionType::kClick;
    std::string widget_id;   // empty for scroll
    std::string text;        // input payload
    std::string direction;   // scroll: "down" | "up"
};

struct StepOutcome {
    bool accepted = false;
    bool state_changed = false;
    bool input_stored = false;  // an input payload landed in a field
    std::optional<std::string> crash;       // crash bug id
    std::vector<std::string> functional_hits;  // newly triggered, sorted
    std::optional<RawGuiSnapshot> new_snapshot;  // absent after a crash
};

// invalid iff the text violates the charset or exceeds max_len; otherwise
// long when len >= short_len, else short. Partitions all texts.
InputClass classify_input(const InputRule& rule, std::string_view text);

class SimulatorState {
  public:
    // Entry screen, empty logs, crashed=false. The model must outlive the
    // state and is shared read-only between sessions.
    SimulatorState(const AppModel* app, std::uint64_t seed);

    const AppModel& app() const { return *app_; }
    const std::string& current_screen() const { return current_screen_; }
    bool crashed() const { return crashed_; }
    std::uint64_t seed() const { return seed_; }
    const std::map<std::string, std::string>& variables() const {
        return variables_;
    }
    const std::vector<std::string>& session_events() const {
        return session_events_;
    }
    const std::set<std::string>& triggered_bugs() const {
        return triggered_bugs_;
    }

    // Stable hash over (current screen, sorted variables); two states with
    // equal signatures are indistinguishable to the metrics layer.
    std::uint64_t state_signature() const;

    // The current widget window with live values; unrevealed widgets are
    // included but marked hidden. Throws Error(kSessionCrashed) after a crash.
    RawGuiSnapshot current_snapshot() const;

    // Applies one event, fires its effects, logs event tags, and evaluates
    // bug triggers on accepted events. Never aborts: any event yields a
    // StepOutcome or a declared error (kSessionCrashed, kUnknownWidget,
    // kHiddenWidget). An action the widget does not support is modeled as a
    // rejected tap (accepted=false), not an error.
    StepOutcome apply_event(const GuiEvent& event);

  private:
    const ScreenSpec& screen() const;
    bool widget_hidden(const WidgetSpec& w) const;
    bool widget_activated(std::string_view widget_id) const;
    int page_of(const std::string& screen_id) const;
    std::string variable(const std::string& name) const;
    SnapWidget snap_widget(const WidgetSpec& w) const;
    bool guard_passes(const Effect& e) const;
    void evaluate_bugs(const std::string& event_screen, const GuiEvent& event,
                       StepOutcome& out);

    const AppModel* app_;
    std::uint64_t seed_;
    std::string current_screen_;
    std::map<std::string, std::string> variables_;
    std::vector<std::string> session_events_;
    std::set<std::string> triggered_bugs_;
    bool crashed_ = false;
};

inline SimulatorState reset(const AppModel& app, std::uint64_t seed) {
    return SimulatorState(&app, seed);
}

}  // namespace pprobe
