#include "personaprobe/execution.hpp"

#include <algorithm>
#include <tuple>
#include <unordered_map>

#include "personaprobe/error.hpp"

namespace pprobe {

Point resolve_coordinates(const GuiStateDoc& doc, const TestOperation& op) {
    if (op.target_ref < 0 ||
        op.target_ref >= static_cast<int>(doc.records.size())) {
        raise(ErrorCode::kTargetOutOfRange,
              "operation targets ref " + std::to_string(op.target_ref) +
                  " but the document has " + std::to_string(doc.records.size()) +
                  " widgets");
    }
    const Bounds& b = doc.records[static_cast<std::size_t>(op.target_ref)].bounds;
    return Point{b.x + b.w / 2, b.y + b.h / 2};
}

SimulatorBackend::SimulatorBackend(const AppModel* app) : app_(app) {
    if (app_ == nullptr) {
        raise(ErrorCode::kInvalidArgument, "SimulatorBackend needs an app model");
    }
}

void SimulatorBackend::reset(std::uint64_t seed) {
    state_ = std::make_unique<SimulatorState>(app_, seed);
}

RawGuiSnapshot SimulatorBackend::snapshot() {
    if (!state_) {
        raise(ErrorCode::kBackendFailure, "backend has no live session; call reset first");
    }
    try {
        return state_->current_snapshot();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::kSessionCrashed) {
            raise(ErrorCode::kBackendFailure,
                  std::string("session lost: ") + e.what());
        }
        throw;
    }
}

StepOutcome SimulatorBackend::apply(const ResolvedOp& op) {
    if (!state_) {
        raise(ErrorCode::kBackendFailure, "backend has no live session; call reset first");
    }
    if (state_->crashed()) {
        raise(ErrorCode::kBackendFailure, "session lost: the app has crashed");
    }

    GuiEvent ev;
    ev.action = op.action;
    if (op.action == ActionType::kScroll) {
        ev.direction = op.direction;
        return state_->apply_event(ev);
    }

    // Hit-test against everything currently drawn, decorations included: a
    // tap has no idea what it is touching. Smallest containing bounds wins,
    // reading order (y, x, id) breaks ties.
    RawGuiSnapshot snap = state_->current_snapshot();
    const SnapWidget* target = nullptr;
    for (const SnapWidget& w : snap.widgets) {
        if (w.hidden || !w.bounds.contains(op.at.x, op.at.y)) {
            continue;
        }
        if (target == nullptr) {
            target = &w;
            continue;
        }
        auto key = [](const SnapWidget& s) {
            return std::tuple<long long, int, int, const std::string&>(
                s.bounds.area(), s.bounds.y, s.bounds.x, s.id);
        };
        if (key(w) < key(*target)) {
            target = &w;
        }
    }
    if (target == nullptr) {
        StepOutcome out;
        out.accepted = false;
        out.new_snapshot = snap;
        return out;
    }

    ev.widget_id = target->id;
    ev.text = op.text;
    try {
        return state_->apply_event(ev);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::kSessionCrashed) {
            raise(ErrorCode::kBackendFailure,
                  std::string("session lost: ") + e.what());
        }
        throw;
    }
}

const SimulatorState& SimulatorBackend::state() const {
    if (!state_) {
        raise(ErrorCode::kBackendFailure, "backend has no live session; call reset first");
    }
    return *state_;
}

namespace {

std::unordered_map<std::string, const DocRecord*> by_widget_id(const GuiStateDoc& doc) {
    std::unordered_map<std::string, const DocRecord*> out;
    for (std::size_t i = 0; i < doc.records.size(); ++i) {
        out.emplace(doc.widget_ids[i], &doc.records[i]);
    }
    return out;
}

}  // namespace

IntentVerdict intent_check(const GuiStateDoc& prev, const GuiStateDoc& next,
                           const TestIntent& intent) {
    IntentVerdict v;
    switch (intent.expected_effect) {
        case ExpectedEffect::kScreenChange: {
            if (prev.screen_id != next.screen_id) {
                v.fulfilled = true;
            } else {
                v.reason = "expected a screen change but the screen is still \"" +
                           prev.screen_id + "\"";
            }
            return v;
        }
        case ExpectedEffect::kValueChange: {
            auto before = by_widget_id(prev);
            for (std::size_t i = 0; i < next.records.size(); ++i) {
                auto it = before.find(next.widget_ids[i]);
                if (it != before.end() &&
                    it->second->value != next.records[i].value) {
                    v.fulfilled = true;
                    return v;
                }
            }
            v.reason = "expected a widget value to change but none did";
            return v;
        }
        case ExpectedEffect::kRevealWidget: {
            auto before = by_widget_id(prev);
            for (std::size_t i = 0; i < next.records.size(); ++i) {
                if (!next.records[i].interactable) {
                    continue;
                }
                auto it = before.find(next.widget_ids[i]);
                if (it == before.end() || !it->second->interactable) {
                    v.fulfilled = true;
                    return v;
                }
            }
            v.reason = "expected a newly interactable widget but none appeared";
            return v;
        }
        case ExpectedEffect::kNoneExpected: {
            if (prev.bytes == next.bytes) {
                v.fulfilled = true;
            } else {
                v.reason = "expected no visible effect but the GUI state changed";
            }
            return v;
        }
    }
    raise(ErrorCode::kInvalidArgument, "unknown expected effect");
}

BugFindings detect_bugs(const StepOutcome& outcome, const GuiStateDoc* next_doc) {
    BugFindings f;
    if (outcome.crash.has_value()) {
        f.crashes.insert(*outcome.crash);
    }
    for (const std::string& id : outcome.functional_hits) {
        f.functional.insert(id);
    }
    if (next_doc == nullptr) {
        return f;
    }

    const GuiStateDoc& doc = *next_doc;
    for (std::size_t i = 0; i < doc.records.size(); ++i) {
        const DocRecord& r = doc.records[i];
        const Bounds& b = r.bounds;
        if (b.x < 0 || b.y < 0 || b.x + b.w > kCanvasWidth ||
            b.y + b.h > kCanvasHeight) {
            f.anomalies.push_back(
                {r.ref, "widget \"" + doc.widget_ids[i] +
                            "\" extends beyond the canvas"});
        }
        if (r.interactable && r.label.empty()) {
            f.anomalies.push_back(
                {r.ref, "interactable widget \"" + doc.widget_ids[i] +
                            "\" has no label"});
        }
        if (!r.interactable) {
            continue;
        }
        for (std::size_t j = i + 1; j < doc.records.size(); ++j) {
            const DocRecord& s = doc.records[j];
            if (!s.interactable || !bounds_overlap(r.bounds, s.bounds)) {
                continue;
            }
            f.anomalies.push_back(
                {r.ref, "interactable widgets \"" + doc.widget_ids[i] +
                            "\" and \"" + doc.widget_ids[j] + "\" overlap"});
            f.anomalies.push_back(
                {s.ref, "interactable widgets \"" + doc.widget_ids[i] +
                            "\" and \"" + doc.widget_ids[j] + "\" overlap"});
        }
    }
    return f;
}

}  // namespace pprobe
