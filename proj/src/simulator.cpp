#include "personaprobe/simulator.hpp"

#include <algorithm>

#include "personaprobe/hashing.hpp"

namespace pprobe {

namespace {

// Fields visually grow with their content; one character costs this many
// abstract pixels of width. Growth is clamped to the canvas edge.
constexpr int kCharGrowthPx = 9;

const Effect* first_effect(const WidgetSpec& w, const std::string& action,
                           EffectType type) {
    auto it = w.actions.find(action);
    if (it == w.actions.end()) return nullptr;
    for (const auto& e : it->second) {
        if (e.type == type) return &e;
    }
    return nullptr;
}

bool is_subsequence(const std::vector<std::string>& needle,
                    const std::vector<std::string>& haystack) {
    std::size_t i = 0;
    for (const auto& item : haystack) {
        if (i < needle.size() && item == needle[i]) ++i;
    }
    return i == needle.size();
}

}  // namespace

InputClass classify_input(const InputRule& rule, std::string_view text) {
    if (text.size() > rule.max_len) return InputClass::kInvalid;
    for (char c : text) {
        if (!rule.charset.contains(c)) return InputClass::kInvalid;
    }
    if (text.size() >= rule.short_len) return InputClass::kValidLong;
    return InputClass::kValidShort;
}

SimulatorState::SimulatorState(const AppModel* app, std::uint64_t seed)
    : app_(app), seed_(seed), current_screen_(app->entry_screen) {
    // Declared toggle states exist from the start so guards and snapshots
    // see them before the first interaction.
    for (const auto& s : app_->screens) {
        for (const auto& w : s.widgets) {
            for (const auto& [action, effects] : w.actions) {
                for (const auto& e : effects) {
                    if (e.type == EffectType::kToggleVar &&
                        !variables_.count(e.var)) {
                        variables_[e.var] = e.initial;
                    }
                }
            }
        }
    }
}

const ScreenSpec& SimulatorState::screen() const {
    const ScreenSpec* s = app_->find_screen(current_screen_);
    if (!s) {
        raise(ErrorCode::kDanglingReference,
              "current screen vanished: " + current_screen_);
    }
    return *s;
}

bool SimulatorState::widget_activated(std::string_view widget_id) const {
    return variables_.count("activated:" + std::string(widget_id)) > 0;
}

bool SimulatorState::widget_hidden(const WidgetSpec& w) const {
    return !w.revealed_by.empty() && !widget_activated(w.revealed_by);
}

int SimulatorState::page_of(const std::string& screen_id) const {
    auto it = variables_.find("page:" + screen_id);
    if (it == variables_.end()) return 0;
    int value = 0;
    for (char c : it->second) {
        if (c < '0' || c > '9') return 0;
        value = value * 10 + (c - '0');
    }
    return value;
}

std::string SimulatorState::variable(const std::string& name) const {
    auto it = variables_.find(name);
    return it == variables_.end() ? std::string() : it->second;
}

std::uint64_t SimulatorState::state_signature() const {
    std::string canon = "screen\x1e" + current_screen_;
    for (const auto& [key, value] : variables_) {
        canon += '\x1f';
        canon += key;
        canon += '\x1e';
        canon += value;
    }
    return fnv1a64(canon);
}

SnapWidget SimulatorState::snap_widget(const WidgetSpec& w) const {
    SnapWidget out;
    out.id = w.id;
    out.kind = w.kind;
    out.label = w.label;
    out.bounds = w.bounds;
    out.transient = w.transient;
    out.hidden = widget_hidden(w);
    out.core = w.core;
    out.interactable = is_interactable_kind(w.kind);
    out.revealed_by = w.revealed_by;
    out.input_rule = w.input_rule;

    if (const Effect* g = first_effect(w, "click", EffectType::kGoto)) {
        out.goto_target = g->target;
    }
    if (w.kind == WidgetKind::kInputField) {
        out.live_value = variable("field:" + w.id);
        const int grown =
            w.bounds.w + kCharGrowthPx * static_cast<int>(out.live_value.size());
        out.bounds.w = std::min(grown, kCanvasWidth - w.bounds.x);
    } else if (w.kind == WidgetKind::kToggle) {
        if (const Effect* t = first_effect(w, "toggle", EffectType::kToggleVar)) {
            out.live_value = variable(t->var) == "1" ? "on" : "off";
        } else {
            out.live_value = "off";
        }
    }
    return out;
}

RawGuiSnapshot SimulatorState::current_snapshot() const {
    if (crashed_) {
        raise(ErrorCode::kSessionCrashed,
              "session crashed; no further snapshots");
    }
    const ScreenSpec& s = screen();
    const std::size_t total = s.widgets.size();
    std::size_t page = static_cast<std::size_t>(page_of(s.id));
    if (total > 0 && page * kScreenWindow >= total) {
        page = (total - 1) / kScreenWindow;
    }

    RawGuiSnapshot snap;
    snap.screen_id = s.id;
    snap.page = static_cast<int>(page);
    snap.can_scroll_up = page > 0;
    snap.can_scroll_down = (page + 1) * kScreenWindow < total;
    const std::size_t begin = page * kScreenWindow;
    const std::size_t end = std::min(total, begin + kScreenWindow);
    for (std::size_t i = begin; i < end; ++i) {
        snap.widgets.push_back(snap_widget(s.widgets[i]));
    }
    return snap;
}

bool SimulatorState::guard_passes(const Effect& e) const {
    if (!e.when) return true;
    return variable(e.when->var) == e.when->equals;
}

void SimulatorState::evaluate_bugs(const std::string& event_screen,
                                   const GuiEvent& event, StepOutcome& out) {
    std::vector<std::string> functional;
    for (const auto& bug : app_->bugs) {
        if (triggered_bugs_.count(bug.id)) continue;

        bool hit = false;
        if (bug.trigger.type == BugTrigger::Type::kPoint) {
            hit = bug.trigger.screen == event_screen &&
                  bug.trigger.widget == event.widget_id &&
                  bug.trigger.action == event.action;
            if (hit && bug.trigger.required_input_class) {
                const WidgetSpec* w = app_->find_widget(event.widget_id);
                hit = event.action == ActionType::kInput && w && w->input_rule &&
                      classify_input(*w->input_rule, event.text) ==
                          *bug.trigger.required_input_class;
            }
        } else {
            hit = is_subsequence(bug.trigger.tags, session_events_) &&
                  (!bug.trigger.anchored ||
                   (!session_events_.empty() &&
                    session_events_.front() == bug.trigger.tags.front()));
        }
        if (!hit) continue;

        triggered_bugs_.insert(bug.id);
        if (bug.kind == BugKind::kCrash) {
            if (!out.crash) {
                out.crash = bug.id;
                crashed_ = true;
            }
        } else {
            functional.push_back(bug.id);
        }
    }
    std::sort(functional.begin(), functional.end());
    out.functional_hits = std::move(functional);
}

StepOutcome SimulatorState::apply_event(const GuiEvent& event) {
    if (crashed_) {
        raise(ErrorCode::kSessionCrashed,
              "session crashed; no further events accepted");
    }

    const std::string event_screen = current_screen_;
    const std::uint64_t before = state_signature();
    StepOutcome out;

    if (event.action == ActionType::kScroll) {
        const ScreenSpec& s = screen();
        const std::size_t total = s.widgets.size();
        const int page = page_of(s.id);
        const bool down = event.direction != "up";
        if (down &&
            (static_cast<std::size_t>(page) + 1) * kScreenWindow < total) {
            variables_["page:" + s.id] = std::to_string(page + 1);
            out.accepted = true;
        } else if (!down && page > 0) {
            variables_["page:" + s.id] = std::to_string(page - 1);
            out.accepted = true;
        }
        if (out.accepted) {
            session_events_.push_back("scroll:" + s.id + ":" +
                                      (down ? "down" : "up"));
        }
    } else {
        const ScreenSpec& s = screen();
        const WidgetSpec* widget = nullptr;
        for (const auto& w : s.widgets) {
            if (w.id == event.widget_id) {
                widget = &w;
                break;
            }
        }
        if (!widget) {
            raise(ErrorCode::kUnknownWidget,
                  "widget \"" + event.widget_id + "\" is not on screen \"" +
                      s.id + "\"");
        }
        if (widget_hidden(*widget)) {
            raise(ErrorCode::kHiddenWidget,
                  "widget \"" + event.widget_id + "\" is not revealed yet");
        }

        const auto action_it =
            widget->actions.find(std::string(action_name(event.action)));
        if (is_interactable_kind(widget->kind) &&
            action_it != widget->actions.end()) {
            std::optional<InputClass> payload_class;
            if (event.action == ActionType::kInput && widget->input_rule) {
                payload_class = classify_input(*widget->input_rule, event.text);
            }

            std::vector<std::string> tags;
            bool fired_any = false;
            std::string goto_target;
            for (const Effect& e : action_it->second) {
                if (!guard_passes(e)) continue;
                switch (e.type) {
                    case EffectType::kGoto:
                        goto_target = e.target;
                        fired_any = true;
                        break;
                    case EffectType::kSetVar:
                        variables_[e.var] = e.value;
                        fired_any = true;
                        break;
                    case EffectType::kToggleVar: {
                        const std::string cur = variables_.count(e.var)
                                                    ? variables_[e.var]
                                                    : e.initial;
                        variables_[e.var] = cur == "1" ? "0" : "1";
                        fired_any = true;
                        break;
                    }
                    case EffectType::kAcceptInput: {
                        if (e.validate == InputValidate::kRejectInvalid &&
                            payload_class == InputClass::kInvalid) {
                            break;  // field refuses the text
                        }
                        if (e.retain) {
                            variables_["field:" + widget->id] = event.text;
                        } else {
                            variables_.erase("field:" + widget->id);
                        }
                        out.input_stored = true;
                        fired_any = true;
                        break;
                    }
                    case EffectType::kIncrVar: {
                        long long v = 0;
                        const std::string cur = variable(e.var);
                        bool numeric = !cur.empty();
                        for (char c : cur) {
                            if (c < '0' || c > '9') numeric = false;
                        }
                        if (numeric) v = std::stoll(cur);
                        variables_[e.var] = std::to_string(v + 1);
                        fired_any = true;
                        break;
                    }
                    case EffectType::kClearVars:
                        for (const auto& name : e.vars) variables_.erase(name);
                        fired_any = true;
                        break;
                    case EffectType::kTag:
                        tags.push_back(e.value);
                        fired_any = true;
                        break;
                }
            }

            out.accepted = fired_any;
            if (out.accepted) {
                variables_["activated:" + widget->id] = "1";

                // Auto tag first, then effect-produced tags in firing order.
                std::string auto_tag;
                switch (event.action) {
                    case ActionType::kClick:
                        auto_tag = "click:" + widget->id;
                        break;
                    case ActionType::kToggle: {
                        auto_tag = "toggle:" + widget->id;
                        if (const Effect* t = first_effect(
                                *widget, "toggle", EffectType::kToggleVar)) {
                            auto_tag +=
                                variable(t->var) == "1" ? ":on" : ":off";
                        }
                        break;
                    }
                    case ActionType::kInput:
                        auto_tag = "input:" + widget->id + ":" +
                                   std::string(input_class_name(
                                       payload_class.value_or(
                                           InputClass::kValidShort)));
                        break;
                    case ActionType::kScroll:
                        break;
                }
                if (!auto_tag.empty()) session_events_.push_back(auto_tag);
                if (!goto_target.empty()) {
                    current_screen_ = goto_target;
                    session_events_.push_back("goto:" + goto_target);
                }
                for (auto& t : tags) session_events_.push_back(std::move(t));
            }
        }
    }

    if (out.accepted) {
        evaluate_bugs(event_screen, event, out);
    }
    out.state_changed = before != state_signature();
    if (!crashed_) {
        out.new_snapshot = current_snapshot();
    }
    return out;
}

}  // namespace pprobe
