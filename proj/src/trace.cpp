#include "personaprobe/trace.hpp"

#include <fstream>

#include "json.hpp"
#include "personaprobe/error.hpp"
#include "personaprobe/metrics.hpp"

namespace pprobe {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json event_to_json(const DecisionRecord& r) {
    ordered_json op;
    op["intent"] = {
        {"goal", r.operation.intent.goal},
        {"expected_effect",
         std::string(expected_effect_name(r.operation.intent.expected_effect))},
    };
    op["target_ref"] = r.operation.target_ref;
    op["target_widget_id"] = r.operation.target_widget_id;
    op["action"] = std::string(action_name(r.operation.action));
    op["params"] = {
        {"text", r.operation.params.text},
        {"direction", r.operation.params.direction},
    };
    op["summary"] = r.operation.summary;

    ordered_json out;
    out["accepted"] = r.outcome.accepted;
    out["state_changed"] = r.outcome.state_changed;
    out["input_stored"] = r.outcome.input_stored;
    out["intent_fulfilled"] = r.outcome.intent_fulfilled;
    out["verdict_reason"] = r.outcome.verdict_reason;
    out["bugs"] = r.outcome.bugs;
    out["anomalies"] = r.outcome.anomalies;

    ordered_json target;
    target["widget_id"] = r.operation.target_widget_id;
    target["kind"] = std::string(widget_kind_name(r.target_kind));
    target["label"] = r.target_label;
    target["bounds"] = {r.target_bounds.x, r.target_bounds.y, r.target_bounds.w,
                        r.target_bounds.h};

    ordered_json ev;
    ev["step"] = r.step_index;
    ev["operation"] = op;
    ev["outcome"] = out;
    ev["phrase"] = r.purified_phrase;
    ev["target"] = target;
    ev["screen"] = r.screen_id;
    return ev;
}

const ordered_json& need(const ordered_json& j, const char* key,
                         const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) {
        raise(ErrorCode::kSchemaViolation,
              "trace line is missing \"" + where + key + "\"");
    }
    return *it;
}

std::string need_string(const ordered_json& j, const char* key,
                        const std::string& where) {
    const ordered_json& v = need(j, key, where);
    if (!v.is_string()) {
        raise(ErrorCode::kSchemaViolation,
              "trace field \"" + where + key + "\" must be a string");
    }
    return v.get<std::string>();
}

bool need_bool(const ordered_json& j, const char* key, const std::string& where) {
    const ordered_json& v = need(j, key, where);
    if (!v.is_boolean()) {
        raise(ErrorCode::kSchemaViolation,
              "trace field \"" + where + key + "\" must be a boolean");
    }
    return v.get<bool>();
}

std::vector<std::string> need_string_array(const ordered_json& j, const char* key,
                                           const std::string& where) {
    const ordered_json& v = need(j, key, where);
    if (!v.is_array()) {
        raise(ErrorCode::kSchemaViolation,
              "trace field \"" + where + key + "\" must be an array");
    }
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) {
            raise(ErrorCode::kSchemaViolation,
                  "trace field \"" + where + key + "\" must hold strings");
        }
        out.push_back(e.get<std::string>());
    }
    return out;
}

DecisionRecord event_from_json(const ordered_json& ev) {
    DecisionRecord r;
    r.step_index = need(ev, "step", "events.").get<int>();

    const ordered_json& op = need(ev, "operation", "events.");
    const ordered_json& intent = need(op, "intent", "events.operation.");
    r.operation.intent.goal = need_string(intent, "goal", "events.operation.intent.");
    r.operation.intent.expected_effect = parse_expected_effect(
        need_string(intent, "expected_effect", "events.operation.intent."));
    r.operation.target_ref = need(op, "target_ref", "events.operation.").get<int>();
    r.operation.target_widget_id =
        need_string(op, "target_widget_id", "events.operation.");
    r.operation.action =
        parse_action(need_string(op, "action", "events.operation."));
    const ordered_json& params = need(op, "params", "events.operation.");
    r.operation.params.text = need_string(params, "text", "events.operation.params.");
    r.operation.params.direction =
        need_string(params, "direction", "events.operation.params.");
    r.operation.summary = need_string(op, "summary", "events.operation.");

    const ordered_json& out = need(ev, "outcome", "events.");
    r.outcome.accepted = need_bool(out, "accepted", "events.outcome.");
    r.outcome.state_changed = need_bool(out, "state_changed", "events.outcome.");
    r.outcome.input_stored = need_bool(out, "input_stored", "events.outcome.");
    r.outcome.intent_fulfilled = need_bool(out, "intent_fulfilled", "events.outcome.");
    r.outcome.verdict_reason = need_string(out, "verdict_reason", "events.outcome.");
    r.outcome.bugs = need_string_array(out, "bugs", "events.outcome.");
    r.outcome.anomalies = need_string_array(out, "anomalies", "events.outcome.");

    r.purified_phrase = need_string(ev, "phrase", "events.");

    const ordered_json& target = need(ev, "target", "events.");
    r.target_kind =
        parse_widget_kind(need_string(target, "kind", "events.target."));
    r.target_label = need_string(target, "label", "events.target.");
    const ordered_json& b = need(target, "bounds", "events.target.");
    if (!b.is_array() || b.size() != 4) {
        raise(ErrorCode::kSchemaViolation,
              "trace field \"events.target.bounds\" must be [x, y, w, h]");
    }
    r.target_bounds =
        Bounds{b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()};

    r.screen_id = need_string(ev, "screen", "events.");
    return r;
}

}  // namespace

std::string trace_to_json_line(const Trace& trace) {
    ordered_json j;
    j["agent"] = trace.agent_name;
    j["persona"] = trace.persona ? to_code(*trace.persona) : std::string("baseline");
    j["app"] = trace.app_id;
    j["task"] = trace.task;
    j["run_index"] = trace.run_index;
    j["seed"] = trace.seed;
    j["events"] = ordered_json::array();
    for (const DecisionRecord& r : trace.events) {
        j["events"].push_back(event_to_json(r));
    }
    j["wall_time"] = trace.wall_time;
    j["triggered_bugs"] = trace.triggered_bugs;
    j["end_reason"] = trace.end_reason;
    return j.dump();
}

Trace trace_from_json_line(const std::string& line) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const std::exception& e) {
        raise(ErrorCode::kSchemaViolation,
              std::string("trace line is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        raise(ErrorCode::kSchemaViolation, "trace line must be a JSON object");
    }

    Trace t;
    t.agent_name = need_string(j, "agent", "");
    std::string persona_code = need_string(j, "persona", "");
    if (persona_code != "baseline") {
        t.persona = parse_persona(persona_code);
    }
    t.app_id = need_string(j, "app", "");
    t.task = need_string(j, "task", "");
    t.run_index = need(j, "run_index", "").get<int>();
    t.seed = need(j, "seed", "").get<std::uint64_t>();
    const ordered_json& events = need(j, "events", "");
    if (!events.is_array()) {
        raise(ErrorCode::kSchemaViolation, "trace field \"events\" must be an array");
    }
    for (const auto& ev : events) {
        t.events.push_back(event_from_json(ev));
    }
    t.wall_time = need(j, "wall_time", "").get<double>();
    t.triggered_bugs = need_string_array(j, "triggered_bugs", "");
    t.end_reason = need_string(j, "end_reason", "");
    return t;
}

void write_traces_jsonl(const std::string& path, const std::vector<Trace>& traces) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        raise(ErrorCode::kIoError, "cannot open \"" + path + "\" for writing");
    }
    for (const Trace& t : traces) {
        out << trace_to_json_line(t) << '\n';
    }
    if (!out) {
        raise(ErrorCode::kIoError, "failed while writing \"" + path + "\"");
    }
}

std::vector<Trace> read_traces_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(ErrorCode::kIoError, "cannot open \"" + path + "\" for reading");
    }
    std::vector<Trace> traces;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        traces.push_back(trace_from_json_line(line));
    }
    return traces;
}

std::vector<std::string> purify(const Trace& trace) {
    std::vector<std::string> phrases;
    phrases.reserve(trace.events.size());
    for (const DecisionRecord& r : trace.events) {
        phrases.push_back(purify_phrase(r.operation.action, r.target_kind,
                                        r.target_label, r.target_bounds,
                                        r.operation.params.direction));
    }
    return phrases;
}

EffectivenessStats effectiveness(const Trace& trace) {
    EffectivenessStats s;
    for (const DecisionRecord& r : trace.events) {
        ++s.total_events;
        bool effective = r.outcome.state_changed || r.outcome.input_stored ||
                         !r.outcome.bugs.empty();
        if (effective) {
            ++s.effective_events;
        }
        if (r.operation.action == ActionType::kInput) {
            ++s.input_events;
            if (effective) {
                ++s.effective_input_events;
            }
        }
    }
    if (s.total_events > 0) {
        s.general_ratio =
            static_cast<double>(s.effective_events) / s.total_events;
    }
    if (s.input_events > 0) {
        s.input_ratio =
            static_cast<double>(s.effective_input_events) / s.input_events;
    }
    return s;
}

}  // namespace pprobe
