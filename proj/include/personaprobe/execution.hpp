#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "personaprobe/decision_types.hpp"
#include "personaprobe/perception.hpp"
#include "personaprobe/simulator.hpp"

// Operation execution and post-step validation: coordinate resolution,
// backend dispatch, intent verdicts, and bug/anomaly findings.

namespace pprobe {

struct Point {
    int x = 0;
    int y = 0;
};

// An operation lowered to physical form: an action at screen coordinates.
struct ResolvedOp {
    ActionType action = ActionType::kClick;
    Point at;
    std::string text;
    std::string direction;
};

struct IntentVerdict {
    bool fulfilled = false;
    std::string reason;  // non-empty when unfulfilled
};

struct AnomalyFinding {
    int ref = -1;
    std::string description;
};

struct BugFindings {
    std::set<std::string> crashes;
    std::set<std::string> functional;
    std::vector<AnomalyFinding> anomalies;
};

// Integer center of the target's bounds (floor). Scroll operations carry no
// target; calling this for one (target_ref < 0) throws kTargetOutOfRange,
// as does a ref beyond the document.
Point resolve_coordinates(const GuiStateDoc& doc, const TestOperation& op);

// Contract for execution backends (the simulator is the shipped one; a
// device bridge would implement the same three calls).
class ExecutionBackend {
  public:
    virtual ~ExecutionBackend() = default;

    virtual void reset(std::uint64_t seed) = 0;
    // Throws Error(kBackendFailure) when the session is lost (e.g. crashed).
    virtual RawGuiSnapshot snapshot() = 0;
    virtual StepOutcome apply(const ResolvedOp& op) = 0;
};

// Adapts coordinates back to widget hit-testing over the currently visible
// widgets (smallest containing bounds wins; reading order breaks ties). A
// tap that lands on nothing is a rejected step, not an error.
class SimulatorBackend final : public ExecutionBackend {
  public:
    explicit SimulatorBackend(const AppModel* app);

    void reset(std::uint64_t seed) override;
    RawGuiSnapshot snapshot() override;
    StepOutcome apply(const ResolvedOp& op) override;

    const SimulatorState& state() const;

  private:
    const AppModel* app_;
    std::unique_ptr<SimulatorState> state_;
};

inline StepOutcome execute(ExecutionBackend& backend, const ResolvedOp& op) {
    return backend.apply(op);
}

// Deterministic verdict per the operation's expected effect; pure function
// of the two documents.
IntentVerdict intent_check(const GuiStateDoc& prev, const GuiStateDoc& next,
                           const TestIntent& intent);

// Copies crash/functional hits from the outcome and scans the post-step
// document for display anomalies: overlapping interactable bounds, bounds
// escaping the canvas, interactable widgets with no usable label. Pass
// next_doc = nullptr when the session crashed (no post-step screen).
BugFindings detect_bugs(const StepOutcome& outcome, const GuiStateDoc* next_doc);

}  // namespace pprobe
