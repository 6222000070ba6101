#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "personaprobe/app_model.hpp"
#include "personaprobe/persona.hpp"

// Plain data for one decide->execute->validate cycle and the per-session
// context threaded through it.

namespace pprobe {

enum class ExpectedEffect {
    kScreenChange,
    kValueChange,
    kRevealWidget,
    kNoneExpected,
};

std::string_view expected_effect_name(ExpectedEffect e);
ExpectedEffect parse_expected_effect(std::string_view name);

struct TestIntent {
    std::string goal;  // imperative phrase, non-empty
    ExpectedEffect expected_effect = ExpectedEffect::kNoneExpected;
};

struct OpParams {
    std::string text;       // input payload
    std::string direction;  // scroll: "down" | "up"
};

struct TestOperation {
    TestIntent intent;
    int target_ref = -1;          // index into the current GuiStateDoc (-1: scroll)
    std::string target_widget_id;  // stable identity for repeat detection
    ActionType action = ActionType::kClick;
    OpParams params;
    std::string summary;
};

struct OutcomeDigest {
    bool accepted = false;
    bool state_changed = false;
    bool input_stored = false;
    bool intent_fulfilled = false;
    std::string verdict_reason;  // non-empty when unfulfilled
    std::vector<std::string> bugs;       // crash + functional ids, sorted
    std::vector<std::string> anomalies;  // display-level findings
};

struct DecisionRecord {
    int step_index = 0;
    std::vector<double> gui_doc_signature;
    TestOperation operation;
    OutcomeDigest outcome;

    // Target metadata captured at decision time so phrases are recomputable
    // from the record alone.
    std::string purified_phrase;
    WidgetKind target_kind = WidgetKind::kButton;
    std::string target_label;  // raw label ("" when unlabeled or scrolling)
    Bounds target_bounds;
    std::string screen_id;  // screen the decision was made on
};

struct Budget {
    int max_steps = 40;
    int max_wall_seconds = 1200;
};

struct SessionContext {
    std::string app_id;
    std::string task;
    std::string agent_name;
    std::optional<Persona> persona;  // absent for the baseline agent
    std::vector<DecisionRecord> history;
    int step_index = 0;  // == history.size()
    Budget budget;
    std::uint64_t seed = 0;

    // Screens this session has already landed on (exploration memory for
    // novelty-seeking policies).
    std::set<std::string> visited_screens;
};

}  // namespace pprobe
