#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "personaprobe/error.hpp"

// Persona vocabulary: a persona is a three-attribute tuple
// (mindset, strategy, habit) that conditions how a testing agent explores an
// app. Codes follow the "<mindset>.<strategy>.<habit>" grammar, e.g. "A.b.ii".

namespace pprobe {

enum class Mindset {
    kSequentialCoherent,   // "A": linear, goal-directed flows
    kDivergentNonlinear,   // "B": exploratory, jumps between flows
};

enum class Strategy {
    kClickOriented,        // "a": favors clickable controls
    kCoreFunctionFocused,  // "b": favors widgets on the app's core task
    kInputOriented,        // "c": favors text-entry fields
};

enum class Habit {
    kValidLong,   // "i": well-formed input at maximum length
    kValidShort,  // "ii": well-formed minimal input
    kInvalid,     // "iii": rule-violating input
};

struct Persona {
    Mindset mindset;
    Strategy strategy;
    Habit habit;

    friend bool operator==(const Persona&, const Persona&) = default;
};

// Code fragments ("A", "b", "iii") and full-code round-trip.
std::string_view mindset_code(Mindset m);
std::string_view strategy_code(Strategy s);
std::string_view habit_code(Habit h);
std::string to_code(const Persona& p);

// Parses "<m>.<s>.<h>"; throws Error(kMalformedPersonaCode) on anything else.
Persona parse_persona(std::string_view code);

// The nine standard agents, in catalog order P_A..P_I. P_X is the baseline
// agent name and deliberately has no Persona: it denotes the absence of one.
struct CatalogEntry {
    std::string name;
    Persona persona;
};

class PersonaCatalog {
  public:
    static const PersonaCatalog& standard();

    const std::vector<CatalogEntry>& entries() const { return entries_; }

    // Throws Error(kUnknownAgentName) for names outside P_A..P_I (including
    // the baseline name).
    const Persona& lookup(std::string_view agent_name) const;

    bool has(std::string_view agent_name) const;

    // Serialized catalog keyed by agent name (stable field order).
    std::string to_json() const;

  private:
    explicit PersonaCatalog(std::vector<CatalogEntry> entries)
        : entries_(std::move(entries)) {}
    std::vector<CatalogEntry> entries_;
};

inline constexpr std::string_view kBaselineAgentName = "P_X";

// Fixed behavioral description per attribute value; render_persona_prompt
// stitches the three titled sections for a persona. Identical personas render
// identical bytes; distinct personas render distinct bytes.
std::string_view mindset_description(Mindset m);
std::string_view strategy_description(Strategy s);
std::string_view habit_description(Habit h);
std::string render_persona_prompt(const Persona& p);

// Pairwise coverage over the three dimension pairs. 2x3 + 2x3 + 3x3 = 21
// possible pairs; `missing` lists uncovered ones as human-readable labels.
struct CoverageReport {
    std::vector<std::string> missing;
    bool complete() const { return missing.empty(); }
};

CoverageReport verify_pairwise_coverage(const std::vector<Persona>& personas);

}  // namespace pprobe
