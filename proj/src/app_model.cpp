#include "personaprobe/app_model.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pprobe {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& why) {
    raise(ErrorCode::kSchemaViolation, path + ": " + why);
}

[[noreturn]] void dangling(const std::string& path, const std::string& why) {
    raise(ErrorCode::kDanglingReference, path + ": " + why);
}

const json& require(const json& node, const char* key, const std::string& path) {
    auto it = node.find(key);
    if (it == node.end()) schema_error(path, std::string("missing field \"") + key + "\"");
    return *it;
}

std::string require_string(const json& node, const char* key, const std::string& path) {
    const json& v = require(node, key, path);
    if (!v.is_string()) schema_error(path + "." + key, "expected a string");
    return v.get<std::string>();
}

}  // namespace

std::string_view widget_kind_name(WidgetKind k) {
    switch (k) {
        case WidgetKind::kButton: return "button";
        case WidgetKind::kToggle: return "toggle";
        case WidgetKind::kInputField: return "input_field";
        case WidgetKind::kListItem: return "list_item";
        case WidgetKind::kMenuItem: return "menu_item";
        case WidgetKind::kStaticText: return "static_text";
        case WidgetKind::kDecoration: return "decoration";
    }
    return "unknown";
}

std::string_view action_name(ActionType a) {
    switch (a) {
        case ActionType::kClick: return "click";
        case ActionType::kInput: return "input";
        case ActionType::kToggle: return "toggle";
        case ActionType::kScroll: return "scroll";
    }
    return "unknown";
}

std::string_view input_class_name(InputClass c) {
    switch (c) {
        case InputClass::kValidLong: return "valid_long";
        case InputClass::kValidShort: return "valid_short";
        case InputClass::kInvalid: return "invalid";
    }
    return "unknown";
}

WidgetKind parse_widget_kind(std::string_view name) {
    static const std::pair<std::string_view, WidgetKind> table[] = {
        {"button", WidgetKind::kButton},
        {"toggle", WidgetKind::kToggle},
        {"input_field", WidgetKind::kInputField},
        {"list_item", WidgetKind::kListItem},
        {"menu_item", WidgetKind::kMenuItem},
        {"static_text", WidgetKind::kStaticText},
        {"decoration", WidgetKind::kDecoration},
    };
    for (const auto& [n, k] : table) {
        if (n == name) return k;
    }
    raise(ErrorCode::kSchemaViolation,
          "unknown widget kind: \"" + std::string(name) + "\"");
}

ActionType parse_action(std::string_view name) {
    if (name == "click") return ActionType::kClick;
    if (name == "input") return ActionType::kInput;
    if (name == "toggle") return ActionType::kToggle;
    if (name == "scroll") return ActionType::kScroll;
    raise(ErrorCode::kSchemaViolation,
          "unknown action: \"" + std::string(name) + "\"");
}

InputClass parse_input_class(std::string_view name) {
    if (name == "valid_long") return InputClass::kValidLong;
    if (name == "valid_short") return InputClass::kValidShort;
    if (name == "invalid") return InputClass::kInvalid;
    raise(ErrorCode::kSchemaViolation,
          "unknown input class: \"" + std::string(name) + "\"");
}

bool is_interactable_kind(WidgetKind k) {
    switch (k) {
        case WidgetKind::kButton:
        case WidgetKind::kToggle:
        case WidgetKind::kInputField:
        case WidgetKind::kListItem:
        case WidgetKind::kMenuItem:
            return true;
        case WidgetKind::kStaticText:
        case WidgetKind::kDecoration:
            return false;
    }
    return false;
}

bool bounds_overlap(const Bounds& a, const Bounds& b) {
    const int left = std::max(a.x, b.x);
    const int right = std::min(a.x + a.w, b.x + b.w);
    const int top = std::max(a.y, b.y);
    const int bottom = std::min(a.y + a.h, b.y + b.h);
    return left < right && top < bottom;
}

CharClass CharClass::parse(std::string_view pattern) {
    CharClass cc;
    cc.pattern_ = std::string(pattern);
    if (pattern == "any" || pattern.empty()) {
        cc.universal_ = true;
        cc.pattern_ = "any";
        return cc;
    }
    if (pattern.size() < 2 || pattern.front() != '[' || pattern.back() != ']') {
        raise(ErrorCode::kSchemaViolation,
              "charset pattern must be \"any\" or a bracket class: \"" +
                  std::string(pattern) + "\"");
    }
    std::set<char> chars;
    const std::string_view body = pattern.substr(1, pattern.size() - 2);
    std::size_t i = 0;
    while (i < body.size()) {
        if (i + 2 < body.size() && body[i + 1] == '-') {
            const char lo = body[i];
            const char hi = body[i + 2];
            if (lo > hi) {
                raise(ErrorCode::kSchemaViolation,
                      "bad range in charset pattern: \"" + std::string(pattern) + "\"");
            }
            for (char c = lo; c <= hi; ++c) chars.insert(c);
            i += 3;
        } else {
            chars.insert(body[i]);
            ++i;
        }
    }
    if (chars.empty()) {
        raise(ErrorCode::kSchemaViolation,
              "empty charset pattern: \"" + std::string(pattern) + "\"");
    }
    cc.universal_ = false;
    cc.members_.assign(chars.begin(), chars.end());
    return cc;
}

bool CharClass::contains(char c) const {
    if (universal_) return true;
    return members_.find(c) != std::string::npos;
}

std::optional<char> CharClass::excluded_char() const {
    if (universal_) return std::nullopt;
    // Fixed probe order keeps generated invalid payloads deterministic.
    static constexpr std::string_view probes =
        "#@!0123456789abcdefghijklmnopqrstuvwxyz"
        "ABCDEFGHIJKLMNOPQRSTUVWXYZ ._-";
    for (char c : probes) {
        if (!contains(c)) return c;
    }
    return std::nullopt;
}

namespace {

Bounds parse_bounds(const json& node, const std::string& path) {
    if (!node.is_array() || node.size() != 4) {
        schema_error(path, "bounds must be [x, y, w, h]");
    }
    for (const auto& v : node) {
        if (!v.is_number_integer()) schema_error(path, "bounds must be integers");
    }
    Bounds b{node[0].get<int>(), node[1].get<int>(), node[2].get<int>(),
             node[3].get<int>()};
    return b;
}

std::optional<EffectGuard> parse_guard(const json& node, const std::string& path) {
    if (!node.contains("when")) return std::nullopt;
    const json& w = node["when"];
    if (!w.is_object()) schema_error(path + ".when", "expected an object");
    EffectGuard g;
    g.var = require_string(w, "var", path + ".when");
    g.equals = require_string(w, "equals", path + ".when");
    return g;
}

Effect parse_effect(const json& node, const std::string& path) {
    if (!node.is_object()) schema_error(path, "effect must be an object");
    Effect e;
    const std::string type = require_string(node, "type", path);
    e.when = parse_guard(node, path);
    if (type == "goto") {
        e.type = EffectType::kGoto;
        e.target = require_string(node, "target", path);
    } else if (type == "set_var") {
        e.type = EffectType::kSetVar;
        e.var = require_string(node, "var", path);
        e.value = require_string(node, "value", path);
    } else if (type == "toggle_var") {
        e.type = EffectType::kToggleVar;
        e.var = require_string(node, "var", path);
        e.initial = node.value("initial", "0");
        if (e.initial != "0" && e.initial != "1") {
            schema_error(path + ".initial", "toggle initial must be \"0\" or \"1\"");
        }
    } else if (type == "accept_input") {
        e.type = EffectType::kAcceptInput;
        const std::string v = node.value("validate", "accept_all");
        if (v == "accept_all") {
            e.validate = InputValidate::kAcceptAll;
        } else if (v == "reject_invalid") {
            e.validate = InputValidate::kRejectInvalid;
        } else {
            schema_error(path + ".validate",
                         "expected accept_all or reject_invalid");
        }
        e.retain = node.value("retain", true);
    } else if (type == "incr_var") {
        e.type = EffectType::kIncrVar;
        e.var = require_string(node, "var", path);
    } else if (type == "clear_vars") {
        e.type = EffectType::kClearVars;
        const json& vars = require(node, "vars", path);
        if (!vars.is_array()) schema_error(path + ".vars", "expected an array");
        for (const auto& v : vars) {
            if (!v.is_string()) schema_error(path + ".vars", "expected strings");
            e.vars.push_back(v.get<std::string>());
        }
    } else if (type == "tag") {
        e.type = EffectType::kTag;
        e.value = require_string(node, "value", path);
    } else {
        schema_error(path + ".type", "unknown effect type \"" + type + "\"");
    }
    return e;
}

WidgetSpec parse_widget(const json& node, const std::string& path) {
    if (!node.is_object()) schema_error(path, "widget must be an object");
    WidgetSpec w;
    w.id = require_string(node, "id", path);
    w.kind = parse_widget_kind(require_string(node, "kind", path));
    w.label = node.value("label", "");
    w.bounds = parse_bounds(require(node, "bounds", path), path + ".bounds");
    w.core = node.value("core", false);
    w.transient = node.value("transient", false);
    w.revealed_by = node.value("revealed_by", "");

    if (node.contains("input_rule")) {
        const json& r = node["input_rule"];
        if (!r.is_object()) schema_error(path + ".input_rule", "expected an object");
        InputRule rule;
        rule.charset = CharClass::parse(r.value("charset", "any"));
        if (!r.contains("max_len") || !r["max_len"].is_number_unsigned()) {
            schema_error(path + ".input_rule.max_len", "expected a non-negative integer");
        }
        if (!r.contains("short_len") || !r["short_len"].is_number_unsigned()) {
            schema_error(path + ".input_rule.short_len", "expected a non-negative integer");
        }
        rule.max_len = r["max_len"].get<std::size_t>();
        rule.short_len = r["short_len"].get<std::size_t>();
        w.input_rule = rule;
    }

    if (node.contains("actions")) {
        const json& actions = node["actions"];
        if (!actions.is_object()) schema_error(path + ".actions", "expected an object");
        for (auto it = actions.begin(); it != actions.end(); ++it) {
            parse_action(it.key());  // validates the name
            if (!it.value().is_array()) {
                schema_error(path + ".actions." + it.key(), "expected an effect array");
            }
            std::vector<Effect> effects;
            std::size_t idx = 0;
            for (const auto& eff : it.value()) {
                effects.push_back(parse_effect(
                    eff, path + ".actions." + it.key() + "[" + std::to_string(idx) + "]"));
                ++idx;
            }
            w.actions[it.key()] = std::move(effects);
        }
    }
    return w;
}

BugSpec parse_bug(const json& node, const std::string& path) {
    if (!node.is_object()) schema_error(path, "bug must be an object");
    BugSpec b;
    b.id = require_string(node, "id", path);
    const std::string kind = require_string(node, "kind", path);
    if (kind == "crash") {
        b.kind = BugKind::kCrash;
    } else if (kind == "functional") {
        b.kind = BugKind::kFunctional;
    } else {
        schema_error(path + ".kind", "expected crash or functional");
    }
    b.symptom = node.value("symptom", "");

    const json& trig = require(node, "trigger", path);
    const std::string type = require_string(trig, "type", path + ".trigger");
    if (type == "point") {
        b.trigger.type = BugTrigger::Type::kPoint;
        b.trigger.screen = require_string(trig, "screen", path + ".trigger");
        b.trigger.widget = require_string(trig, "widget", path + ".trigger");
        b.trigger.action = parse_action(require_string(trig, "action", path + ".trigger"));
        if (trig.contains("input_class")) {
            b.trigger.required_input_class =
                parse_input_class(trig["input_class"].get<std::string>());
        }
    } else if (type == "sequence") {
        b.trigger.type = BugTrigger::Type::kSequence;
        const json& tags = require(trig, "tags", path + ".trigger");
        if (!tags.is_array() || tags.empty()) {
            schema_error(path + ".trigger.tags", "expected a non-empty array");
        }
        for (const auto& t : tags) {
            if (!t.is_string()) schema_error(path + ".trigger.tags", "expected strings");
            b.trigger.tags.push_back(t.get<std::string>());
        }
        b.trigger.anchored = trig.value("anchored", false);
    } else {
        schema_error(path + ".trigger.type", "expected point or sequence");
    }
    return b;
}

// Structural checks that need the whole model. Collected as strings so the
// CLI can report all problems at once; the loader throws on the first one.
struct Problem {
    ErrorCode code;
    std::string text;
};

std::vector<Problem> collect_problems(const AppModel& m) {
    std::vector<Problem> out;
    const auto add = [&](ErrorCode c, const std::string& t) {
        out.push_back({c, t});
    };

    if (m.app_id.empty()) add(ErrorCode::kSchemaViolation, "app_id: must be non-empty");
    if (m.screens.empty()) add(ErrorCode::kSchemaViolation, "screens: must be non-empty");

    std::set<std::string> screen_ids;
    std::set<std::string> widget_ids;
    for (const auto& s : m.screens) {
        if (s.id.empty()) add(ErrorCode::kSchemaViolation, "screens[]: empty screen id");
        if (!screen_ids.insert(s.id).second) {
            add(ErrorCode::kSchemaViolation, "screens: duplicate id \"" + s.id + "\"");
        }
        for (const auto& w : s.widgets) {
            if (w.id.empty()) {
                add(ErrorCode::kSchemaViolation, "screen " + s.id + ": empty widget id");
                continue;
            }
            if (!widget_ids.insert(w.id).second) {
                add(ErrorCode::kSchemaViolation,
                    "widgets: duplicate id \"" + w.id + "\" (ids are app-wide)");
            }
            const std::string path = "widget " + w.id;
            if (w.bounds.w <= 0 || w.bounds.h <= 0) {
                add(ErrorCode::kSchemaViolation, path + ": bounds must have positive size");
            }
            if (w.bounds.x < 0 || w.bounds.y < 0 ||
                w.bounds.x + w.bounds.w > kCanvasWidth ||
                w.bounds.y + w.bounds.h > kCanvasHeight) {
                add(ErrorCode::kSchemaViolation,
                    path + ": bounds exceed the " + std::to_string(kCanvasWidth) +
                        "x" + std::to_string(kCanvasHeight) + " canvas");
            }
            const bool has_rule = w.input_rule.has_value();
            if (has_rule != (w.kind == WidgetKind::kInputField)) {
                add(ErrorCode::kSchemaViolation,
                    path + ": input_rule must be present exactly for input_field widgets");
            }
            if (has_rule) {
                if (w.input_rule->short_len == 0 ||
                    w.input_rule->short_len > w.input_rule->max_len) {
                    add(ErrorCode::kSchemaViolation,
                        path + ": input_rule requires 0 < short_len <= max_len");
                }
            }
            if (!is_interactable_kind(w.kind) && !w.actions.empty()) {
                add(ErrorCode::kSchemaViolation,
                    path + ": static/decoration widgets must have no actions");
            }
            for (const auto& [act, effects] : w.actions) {
                for (const auto& e : effects) {
                    if (e.type == EffectType::kGoto && !m.find_screen(e.target)) {
                        add(ErrorCode::kDanglingReference,
                            path + ": goto target \"" + e.target + "\" is not a screen");
                    }
                    if (e.type == EffectType::kAcceptInput &&
                        (w.kind != WidgetKind::kInputField || act != "input")) {
                        add(ErrorCode::kSchemaViolation,
                            path + ": accept_input belongs under the input action "
                                   "of an input_field");
                    }
                }
            }
        }
    }

    if (!m.find_screen(m.entry_screen)) {
        add(ErrorCode::kDanglingReference,
            "entry_screen: \"" + m.entry_screen + "\" is not a screen");
    }

    for (const auto& s : m.screens) {
        for (const auto& w : s.widgets) {
            if (w.revealed_by.empty()) continue;
            if (w.revealed_by == w.id) {
                add(ErrorCode::kSchemaViolation,
                    "widget " + w.id + ": revealed_by must not be the widget itself");
            } else if (!widget_ids.count(w.revealed_by)) {
                add(ErrorCode::kDanglingReference,
                    "widget " + w.id + ": revealed_by \"" + w.revealed_by +
                        "\" is not a widget");
            }
        }
    }

    std::set<std::string> bug_ids;
    for (const auto& b : m.bugs) {
        if (!bug_ids.insert(b.id).second) {
            add(ErrorCode::kSchemaViolation, "bugs: duplicate id \"" + b.id + "\"");
        }
        if (b.trigger.type == BugTrigger::Type::kPoint) {
            const ScreenSpec* s = m.find_screen(b.trigger.screen);
            if (!s) {
                add(ErrorCode::kDanglingReference,
                    "bug " + b.id + ": screen \"" + b.trigger.screen + "\" not found");
                continue;
            }
            const auto on_screen =
                std::any_of(s->widgets.begin(), s->widgets.end(),
                            [&](const WidgetSpec& w) { return w.id == b.trigger.widget; });
            if (!on_screen) {
                add(ErrorCode::kDanglingReference,
                    "bug " + b.id + ": widget \"" + b.trigger.widget +
                        "\" is not on screen \"" + b.trigger.screen + "\"");
            }
            if (b.trigger.required_input_class &&
                b.trigger.action != ActionType::kInput) {
                add(ErrorCode::kSchemaViolation,
                    "bug " + b.id + ": input_class requires the input action");
            }
        }
    }
    return out;
}

AppModel parse_model(const json& doc) {
    if (!doc.is_object()) schema_error("$", "model must be a JSON object");
    AppModel m;
    m.app_id = require_string(doc, "app_id", "$");
    m.entry_screen = require_string(doc, "entry_screen", "$");
    m.core_task = require_string(doc, "core_task", "$");

    const json& screens = require(doc, "screens", "$");
    if (!screens.is_array()) schema_error("$.screens", "expected an array");
    std::size_t si = 0;
    for (const auto& s : screens) {
        const std::string path = "$.screens[" + std::to_string(si++) + "]";
        if (!s.is_object()) schema_error(path, "screen must be an object");
        ScreenSpec screen;
        screen.id = require_string(s, "id", path);
        const json& widgets = require(s, "widgets", path);
        if (!widgets.is_array()) schema_error(path + ".widgets", "expected an array");
        std::size_t wi = 0;
        for (const auto& w : widgets) {
            screen.widgets.push_back(
                parse_widget(w, path + ".widgets[" + std::to_string(wi++) + "]"));
        }
        m.screens.push_back(std::move(screen));
    }

    if (doc.contains("bugs")) {
        const json& bugs = doc["bugs"];
        if (!bugs.is_array()) schema_error("$.bugs", "expected an array");
        std::size_t bi = 0;
        for (const auto& b : bugs) {
            m.bugs.push_back(parse_bug(b, "$.bugs[" + std::to_string(bi++) + "]"));
        }
    }
    return m;
}

}  // namespace

const ScreenSpec* AppModel::find_screen(std::string_view id) const {
    for (const auto& s : screens) {
        if (s.id == id) return &s;
    }
    return nullptr;
}

const WidgetSpec* AppModel::find_widget(std::string_view id) const {
    for (const auto& s : screens) {
        for (const auto& w : s.widgets) {
            if (w.id == id) return &w;
        }
    }
    return nullptr;
}

const ScreenSpec* AppModel::screen_of_widget(std::string_view id) const {
    for (const auto& s : screens) {
        for (const auto& w : s.widgets) {
            if (w.id == id) return &s;
        }
    }
    return nullptr;
}

AppModel load_app_model_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        raise(ErrorCode::kSchemaViolation, std::string("JSON parse error: ") + e.what());
    }
    AppModel m = parse_model(doc);
    const auto problems = collect_problems(m);
    if (!problems.empty()) {
        throw Error(problems.front().code, problems.front().text);
    }
    return m;
}

AppModel load_app_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::kIoError, "cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_app_model_json(buf.str());
}

std::vector<std::string> validate_app_model_file(const std::string& path) {
    std::vector<std::string> out;
    std::ifstream in(path);
    if (!in) {
        out.push_back("cannot open model file: " + path);
        return out;
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    json doc;
    try {
        doc = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        out.push_back(std::string("JSON parse error: ") + e.what());
        return out;
    }
    try {
        AppModel m = parse_model(doc);
        for (const auto& p : collect_problems(m)) out.push_back(p.text);
    } catch (const Error& e) {
        out.push_back(e.what());
    }
    return out;
}

}  // namespace pprobe
