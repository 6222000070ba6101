#include "personaprobe/persona.hpp"

#include <sstream>

#include "json.hpp"

namespace pprobe {

namespace {

constexpr std::array<std::string_view, 2> kMindsetCodes = {"A", "B"};
constexpr std::array<std::string_view, 3> kStrategyCodes = {"a", "b", "c"};
constexpr std::array<std::string_view, 3> kHabitCodes = {"i", "ii", "iii"};

constexpr std::array<std::string_view, 2> kMindsetNames = {
    "sequential_and_coherent", "divergent_and_non_linear"};
constexpr std::array<std::string_view, 3> kStrategyNames = {
    "click_oriented", "core_function_focused", "input_oriented"};
constexpr std::array<std::string_view, 3> kHabitNames = {
    "valid_and_long", "valid_and_short", "invalid"};

}  // namespace

std::string_view mindset_code(Mindset m) {
    return kMindsetCodes[static_cast<std::size_t>(m)];
}

std::string_view strategy_code(Strategy s) {
    return kStrategyCodes[static_cast<std::size_t>(s)];
}

std::string_view habit_code(Habit h) {
    return kHabitCodes[static_cast<std::size_t>(h)];
}

std::string to_code(const Persona& p) {
    std::string code;
    code += mindset_code(p.mindset);
    code += '.';
    code += strategy_code(p.strategy);
    code += '.';
    code += habit_code(p.habit);
    return code;
}

Persona parse_persona(std::string_view code) {
    const auto fail = [&]() -> void {
        raise(ErrorCode::kMalformedPersonaCode,
              "malformed persona code: \"" + std::string(code) + "\"");
    };

    const std::size_t first = code.find('.');
    if (first == std::string_view::npos) fail();
    const std::size_t second = code.find('.', first + 1);
    if (second == std::string_view::npos) fail();
    if (code.find('.', second + 1) != std::string_view::npos) fail();

    const std::string_view m = code.substr(0, first);
    const std::string_view s = code.substr(first + 1, second - first - 1);
    const std::string_view h = code.substr(second + 1);

    Persona p{};
    bool seen = false;
    for (std::size_t i = 0; i < kMindsetCodes.size(); ++i) {
        if (m == kMindsetCodes[i]) {
            p.mindset = static_cast<Mindset>(i);
            seen = true;
        }
    }
    if (!seen) fail();

    seen = false;
    for (std::size_t i = 0; i < kStrategyCodes.size(); ++i) {
        if (s == kStrategyCodes[i]) {
            p.strategy = static_cast<Strategy>(i);
            seen = true;
        }
    }
    if (!seen) fail();

    seen = false;
    for (std::size_t i = 0; i < kHabitCodes.size(); ++i) {
        if (h == kHabitCodes[i]) {
            p.habit = static_cast<Habit>(i);
            seen = true;
        }
    }
    if (!seen) fail();

    return p;
}

const PersonaCatalog& PersonaCatalog::standard() {
    static const PersonaCatalog catalog({
        {"P_A", parse_persona("A.a.i")},
        {"P_B", parse_persona("A.b.ii")},
        {"P_C", parse_persona("A.c.iii")},
        {"P_D", parse_persona("B.b.iii")},
        {"P_E", parse_persona("B.a.ii")},
        {"P_F", parse_persona("B.c.i")},
        {"P_G", parse_persona("A.a.iii")},
        {"P_H", parse_persona("B.b.i")},
        {"P_I", parse_persona("A.c.ii")},
    });
    return catalog;
}

const Persona& PersonaCatalog::lookup(std::string_view agent_name) const {
    for (const auto& entry : entries_) {
        if (entry.name == agent_name) return entry.persona;
    }
    raise(ErrorCode::kUnknownAgentName,
          "unknown agent name: \"" + std::string(agent_name) + "\"");
}

bool PersonaCatalog::has(std::string_view agent_name) const {
    for (const auto& entry : entries_) {
        if (entry.name == agent_name) return true;
    }
    return false;
}

std::string PersonaCatalog::to_json() const {
    nlohmann::ordered_json doc;
    for (const auto& entry : entries_) {
        nlohmann::ordered_json row;
        row["code"] = to_code(entry.persona);
        row["mindset"] =
            std::string(kMindsetNames[static_cast<int>(entry.persona.mindset)]);
        row["strategy"] = std::string(
            kStrategyNames[static_cast<int>(entry.persona.strategy)]);
        row["habit"] =
            std::string(kHabitNames[static_cast<int>(entry.persona.habit)]);
        doc[entry.name] = row;
    }
    return doc.dump(2);
}

std::string_view mindset_description(Mindset m) {
    switch (m) {
        case Mindset::kSequentialCoherent:
            return "You explore the app along a structured, linear path with a "
                   "goal-directed flow. Finish the workflow you have started "
                   "before opening another one, and prefer the action that "
                   "continues what you are doing on the current screen.";
        case Mindset::kDivergentNonlinear:
            return "You explore the app in a curious, non-linear way. Jump "
                   "between unrelated features, follow whatever looks novel, "
                   "and favor paths that lead to screens you have not seen "
                   "yet, even if that interrupts the flow you were in.";
    }
    return "";
}

std::string_view strategy_description(Strategy s) {
    switch (s) {
        case Strategy::kClickOriented:
            return "You interact primarily by tapping: buttons, switches, "
                   "list rows, and menu entries. Text fields rarely interest "
                   "you; you only type when there is nothing left to tap.";
        case Strategy::kCoreFunctionFocused:
            return "You concentrate on the app's main job. Seek out the "
                   "widgets that belong to the core task and exercise that "
                   "functionality end to end before touching anything "
                   "peripheral.";
        case Strategy::kInputOriented:
            return "You gravitate to text entry. Whenever a screen offers an "
                   "input field, filling it in comes first; tapping around is "
                   "something you do only to reach more fields.";
    }
    return "";
}

std::string_view habit_description(Habit h) {
    switch (h) {
        case Habit::kValidLong:
            return "When you type into a field, you enter well-formed text "
                   "that pushes the field to its full allowed length, the way "
                   "a power user stress-fills a form.";
        case Habit::kValidShort:
            return "When you type into a field, you enter short, ordinary, "
                   "well-formed values — the minimal text an everyday user "
                   "would consider complete.";
        case Habit::kInvalid:
            return "When you type into a field, you deliberately enter text "
                   "that breaks the field's rules: wrong characters or "
                   "over-length strings, as a careless or adversarial user "
                   "would.";
    }
    return "";
}

std::string render_persona_prompt(const Persona& p) {
    std::ostringstream out;
    out << "Testing Mindset: " << mindset_code(p.mindset) << ". "
        << kMindsetNames[static_cast<int>(p.mindset)] << "\n"
        << mindset_description(p.mindset) << "\n\n";
    out << "Exploration Strategy: " << strategy_code(p.strategy) << ". "
        << kStrategyNames[static_cast<int>(p.strategy)] << "\n"
        << strategy_description(p.strategy) << "\n\n";
    out << "Interaction Habit: " << habit_code(p.habit) << ". "
        << kHabitNames[static_cast<int>(p.habit)] << "\n"
        << habit_description(p.habit) << "\n";
    return out.str();
}

CoverageReport verify_pairwise_coverage(const std::vector<Persona>& personas) {
    bool ms[2][3] = {};
    bool mh[2][3] = {};
    bool sh[3][3] = {};
    for (const Persona& p : personas) {
        const int m = static_cast<int>(p.mindset);
        const int s = static_cast<int>(p.strategy);
        const int h = static_cast<int>(p.habit);
        ms[m][s] = true;
        mh[m][h] = true;
        sh[s][h] = true;
    }

    CoverageReport report;
    for (int m = 0; m < 2; ++m) {
        for (int s = 0; s < 3; ++s) {
            if (!ms[m][s]) {
                report.missing.push_back(
                    "mindset+strategy: " +
                    std::string(kMindsetCodes[m]) + "." +
                    std::string(kStrategyCodes[s]));
            }
        }
    }
    for (int m = 0; m < 2; ++m) {
        for (int h = 0; h < 3; ++h) {
            if (!mh[m][h]) {
                report.missing.push_back(
                    "mindset+habit: " + std::string(kMindsetCodes[m]) + "." +
                    std::string(kHabitCodes[h]));
            }
        }
    }
    for (int s = 0; s < 3; ++s) {
        for (int h = 0; h < 3; ++h) {
            if (!sh[s][h]) {
                report.missing.push_back(
                    "strategy+habit: " + std::string(kStrategyCodes[s]) + "." +
                    std::string(kHabitCodes[h]));
            }
        }
    }
    return report;
}

}  // namespace pprobe
