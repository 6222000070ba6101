#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "personaprobe/error.hpp"

// Declarative app fixtures: screens, widgets, and seeded bugs. A model is
// plain data; the simulator interprets it. Fixtures live in models/*.json.

namespace pprobe {

inline constexpr int kCanvasWidth = 1080;
inline constexpr int kCanvasHeight = 1920;

// Widgets visible at once per screen; longer screens page via scroll.
inline constexpr std::size_t kScreenWindow = 8;

enum class WidgetKind {
    kButton,
    kToggle,
    kInputField,
    kListItem,
    kMenuItem,
    kStaticText,
    kDecoration,
};

enum class ActionType { kClick, kInput, kToggle, kScroll };

enum class InputClass { kValidLong, kValidShort, kInvalid };

std::string_view widget_kind_name(WidgetKind k);
std::string_view action_name(ActionType a);
std::string_view input_class_name(InputClass c);
WidgetKind parse_widget_kind(std::string_view name);
ActionType parse_action(std::string_view name);
InputClass parse_input_class(std::string_view name);

bool is_interactable_kind(WidgetKind k);

struct Bounds {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    bool contains(int px, int py) const {
        return px >= x && px < x + w && py >= y && py < y + h;
    }
    long long area() const {
        return static_cast<long long>(w) * static_cast<long long>(h);
    }
    friend bool operator==(const Bounds&, const Bounds&) = default;
};

bool bounds_overlap(const Bounds& a, const Bounds& b);

// Character-class pattern for input rules: "any" or a bracket class of
// literals and ranges, e.g. "[0-9]", "[a-z ]", "[a-z0-9 ]".
class CharClass {
  public:
    CharClass() = default;
    static CharClass parse(std::string_view pattern);

    bool universal() const { return universal_; }
    bool contains(char c) const;
    // Deterministic probe for a character outside the class; nullopt when the
    // class covers all printable ASCII.
    std::optional<char> excluded_char() const;
    // Characters inside the class, in a fixed order (for generators).
    const std::string& members() const { return members_; }
    const std::string& pattern() const { return pattern_; }

  private:
    bool universal_ = true;
    std::string members_;   // empty when universal
    std::string pattern_ = "any";
};

struct InputRule {
    CharClass charset;
    std::size_t max_len = 0;
    std::size_t short_len = 0;  // 0 < short_len <= max_len
};

// How a field treats incoming text (fixture-level app behavior, independent
// of the payload's classification, which bug triggers use).
enum class InputValidate { kAcceptAll, kRejectInvalid };

// Guard on an effect: the effect fires only when variable `var` currently
// resolves to `equals`.
struct EffectGuard {
    std::string var;
    std::string equals;
};

enum class EffectType {
    kGoto,        // navigate to `target` screen
    kSetVar,      // var := value
    kToggleVar,   // var := flipped ("1"/"0"); `initial` declares the start state
    kAcceptInput, // store the payload into the field's variable
    kIncrVar,     // var := int(var) + 1
    kClearVars,   // reset listed variables to ""
    kTag,         // append a semantic event tag (sequence triggers match these)
};

struct Effect {
    EffectType type;
    std::string target;               // kGoto
    std::string var;                  // kSetVar/kToggleVar/kIncrVar
    std::string value;                // kSetVar / kTag tag text
    std::string initial;              // kToggleVar start state ("0"/"1")
    std::vector<std::string> vars;    // kClearVars
    InputValidate validate = InputValidate::kAcceptAll;  // kAcceptInput
    bool retain = true;               // kAcceptInput: keep text in the field
    std::optional<EffectGuard> when;
};

struct WidgetSpec {
    std::string id;
    WidgetKind kind = WidgetKind::kButton;
    std::string label;  // may be empty; perception then uses a fallback
    Bounds bounds;
    bool core = false;
    bool transient = false;
    std::string revealed_by;  // widget id; empty = always visible
    std::optional<InputRule> input_rule;  // present iff kind == input_field
    std::map<std::string, std::vector<Effect>> actions;  // action name -> effects
};

struct ScreenSpec {
    std::string id;
    std::vector<WidgetSpec> widgets;
};

enum class BugKind { kCrash, kFunctional };

// Point trigger: one event matches (screen, widget, action[, input class]).
// Sequence trigger: the listed tags appear in order (not necessarily
// adjacent) in the session event log; `anchored` pins the first tag to the
// session's first event.
struct BugTrigger {
    enum class Type { kPoint, kSequence } type = Type::kPoint;
    std::string screen;
    std::string widget;
    ActionType action = ActionType::kClick;
    std::optional<InputClass> required_input_class;
    std::vector<std::string> tags;
    bool anchored = false;
};

struct BugSpec {
    std::string id;
    BugKind kind = BugKind::kFunctional;
    BugTrigger trigger;
    std::string symptom;
};

struct AppModel {
    std::string app_id;
    std::string entry_screen;
    std::string core_task;
    std::vector<ScreenSpec> screens;
    std::vector<BugSpec> bugs;

    const ScreenSpec* find_screen(std::string_view id) const;
    const WidgetSpec* find_widget(std::string_view id) const;  // app-wide
    const ScreenSpec* screen_of_widget(std::string_view id) const;
};

// Parse + validate. Schema problems throw Error(kSchemaViolation) with a
// field path; unknown id references throw Error(kDanglingReference).
AppModel load_app_model_json(const std::string& json_text);
AppModel load_app_model_file(const std::string& path);

// Validation as data, for the CLI's validate-model command: returns problem
// strings instead of throwing (empty = valid).
std::vector<std::string> validate_app_model_file(const std::string& path);

}  // namespace pprobe
