#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "personaprobe/decision_types.hpp"
#include "personaprobe/persona.hpp"

// Session traces: the durable record of one agent run, serialized as one
// JSON object per line so campaign outputs stream and diff cleanly.

namespace pprobe {

struct Trace {
    std::string agent_name;
    std::optional<Persona> persona;  // absent for the baseline agent
    std::string app_id;
    std::string task;
    int run_index = 1;  // 1-based within (agent, app)
    std::uint64_t seed = 0;
    std::vector<DecisionRecord> events;
    double wall_time = 0.0;
    std::vector<std::string> triggered_bugs;  // sorted, unique
    std::string end_reason;  // "budget" | "crash" | "exhausted" | "policy_failure"
};

// One line of JSON, no trailing newline. Field order is fixed so identical
// traces serialize to identical bytes.
std::string trace_to_json_line(const Trace& trace);

// Inverse of trace_to_json_line. Throws Error(kSchemaViolation) on missing
// or ill-typed fields.
Trace trace_from_json_line(const std::string& line);

void write_traces_jsonl(const std::string& path, const std::vector<Trace>& traces);
std::vector<Trace> read_traces_jsonl(const std::string& path);

// The operation phrases of a trace in step order, recomputed from each
// record's stored target metadata (not the serialized phrase field), so
// stale or hand-edited phrase strings cannot leak into similarity metrics.
std::vector<std::string> purify(const Trace& trace);

struct EffectivenessStats {
    int total_events = 0;
    int effective_events = 0;
    int input_events = 0;
    int effective_input_events = 0;
    double general_ratio = 0.0;  // 0 when the trace has no events
    std::optional<double> input_ratio;  // absent when no input events
};

// An event counts as effective when it changed simulator state, stored
// input, or surfaced a bug.
EffectivenessStats effectiveness(const Trace& trace);

}  // namespace pprobe
