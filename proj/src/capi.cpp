#include "personaprobe.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "personaprobe/agent.hpp"
#include "personaprobe/app_model.hpp"
#include "personaprobe/campaign.hpp"
#include "personaprobe/error.hpp"
#include "personaprobe/execution.hpp"
#include "personaprobe/persona.hpp"
#include "personaprobe/session.hpp"
#include "personaprobe/trace.hpp"

using nlohmann::ordered_json;

struct ppr_model {
    pprobe::AppModel model;
};

namespace {

thread_local std::string g_last_error;

ppr_status map_code(pprobe::ErrorCode code) {
    using EC = pprobe::ErrorCode;
    switch (code) {
        case EC::kNone: return PPR_OK;
        case EC::kInvalidArgument: return PPR_ERR_INVALID_ARGUMENT;
        case EC::kMalformedPersonaCode: return PPR_ERR_MALFORMED_PERSONA_CODE;
        case EC::kUnknownAgentName: return PPR_ERR_UNKNOWN_AGENT_NAME;
        case EC::kSchemaViolation: return PPR_ERR_SCHEMA_VIOLATION;
        case EC::kDanglingReference: return PPR_ERR_DANGLING_REFERENCE;
        case EC::kUnknownWidget: return PPR_ERR_UNKNOWN_WIDGET;
        case EC::kHiddenWidget: return PPR_ERR_HIDDEN_WIDGET;
        case EC::kSessionCrashed: return PPR_ERR_SESSION_CRASHED;
        case EC::kNoActionableWidget: return PPR_ERR_NO_ACTIONABLE_WIDGET;
        case EC::kPolicyFailure: return PPR_ERR_POLICY_FAILURE;
        case EC::kTargetOutOfRange: return PPR_ERR_TARGET_OUT_OF_RANGE;
        case EC::kBackendFailure: return PPR_ERR_BACKEND_FAILURE;
        case EC::kEmptyPath: return PPR_ERR_EMPTY_PATH;
        case EC::kZeroVector: return PPR_ERR_ZERO_VECTOR;
        case EC::kInsufficientPaths: return PPR_ERR_INSUFFICIENT_PATHS;
        case EC::kConfigError: return PPR_ERR_CONFIG;
        case EC::kIoError: return PPR_ERR_IO;
        case EC::kRuntimeError: return PPR_ERR_RUNTIME;
    }
    return PPR_ERR_RUNTIME;
}

template <typename Fn>
ppr_status guarded(Fn&& fn) {
    try {
        fn();
        return PPR_OK;
    } catch (const pprobe::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return PPR_ERR_RUNTIME;
    } catch (...) {
        g_last_error = "unknown error";
        return PPR_ERR_RUNTIME;
    }
}

ppr_status fail_invalid(const char* message) {
    g_last_error = message;
    return PPR_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) {
        return nullptr;
    }
    std::memcpy(out, s.data(), s.size());
    out[s.size()] = '\0';
    return out;
}

ppr_status emit_string(const std::string& s, char** out) {
    char* copy = dup_string(s);
    if (!copy) {
        g_last_error = "out of memory";
        return PPR_ERR_RUNTIME;
    }
    *out = copy;
    return PPR_OK;
}

std::optional<pprobe::Persona> persona_for(const std::string& agent_name) {
    if (agent_name == pprobe::kBaselineAgentName) {
        return std::nullopt;
    }
    return pprobe::PersonaCatalog::standard().lookup(agent_name);
}

int failure_count(const pprobe::CampaignReport& report) {
    return static_cast<int>(report.session_failures.size());
}

}  // namespace

extern "C" {

const char* ppr_version(void) { return "0.1.0"; }

const char* ppr_last_error(void) { return g_last_error.c_str(); }

void ppr_string_free(char* s) { std::free(s); }

ppr_status ppr_catalog_json(char** out_json) {
    if (!out_json) {
        return fail_invalid("out_json must not be NULL");
    }
    std::string text;
    const ppr_status st = guarded([&]() {
        ordered_json arr = ordered_json::array();
        for (const auto& entry : pprobe::PersonaCatalog::standard().entries()) {
            ordered_json e;
            e["name"] = entry.name;
            e["code"] = pprobe::to_code(entry.persona);
            e["mindset"] = std::string(pprobe::mindset_code(entry.persona.mindset));
            e["strategy"] =
                std::string(pprobe::strategy_code(entry.persona.strategy));
            e["habit"] = std::string(pprobe::habit_code(entry.persona.habit));
            e["baseline"] = false;
            arr.push_back(std::move(e));
        }
        ordered_json baseline;
        baseline["name"] = std::string(pprobe::kBaselineAgentName);
        baseline["code"] = nullptr;
        baseline["mindset"] = nullptr;
        baseline["strategy"] = nullptr;
        baseline["habit"] = nullptr;
        baseline["baseline"] = true;
        arr.push_back(std::move(baseline));
        text = arr.dump(2) + "\n";
    });
    if (st != PPR_OK) {
        return st;
    }
    return emit_string(text, out_json);
}

ppr_status ppr_persona_prompt(const char* agent_name, char** out_text) {
    if (!agent_name || !out_text) {
        return fail_invalid("agent_name and out_text must not be NULL");
    }
    std::string text;
    const ppr_status st = guarded([&]() {
        const auto persona = persona_for(agent_name);
        text = persona ? pprobe::render_persona_prompt(*persona) : std::string();
    });
    if (st != PPR_OK) {
        return st;
    }
    return emit_string(text, out_text);
}

ppr_status ppr_model_load(const char* path, ppr_model** out_model) {
    if (!path || !out_model) {
        return fail_invalid("path and out_model must not be NULL");
    }
    return guarded([&]() {
        auto handle = std::make_unique<ppr_model>();
        handle->model = pprobe::load_app_model_file(path);
        *out_model = handle.release();
    });
}

void ppr_model_free(ppr_model* model) { delete model; }

ppr_status ppr_model_validate_file(const char* path, char** out_problems_json) {
    if (!path || !out_problems_json) {
        return fail_invalid("path and out_problems_json must not be NULL");
    }
    std::string text;
    const ppr_status st = guarded([&]() {
        ordered_json arr = ordered_json::array();
        for (const std::string& problem :
             pprobe::validate_app_model_file(path)) {
            arr.push_back(problem);
        }
        text = arr.dump(2) + "\n";
    });
    if (st != PPR_OK) {
        return st;
    }
    return emit_string(text, out_problems_json);
}

ppr_status ppr_model_summary_json(const ppr_model* model, char** out_json) {
    if (!model || !out_json) {
        return fail_invalid("model and out_json must not be NULL");
    }
    std::string text;
    const ppr_status st = guarded([&]() {
        const pprobe::AppModel& m = model->model;
        ordered_json j;
        j["app_id"] = m.app_id;
        j["core_task"] = m.core_task;
        j["entry_screen"] = m.entry_screen;
        ordered_json screens = ordered_json::array();
        std::size_t widget_count = 0;
        for (const auto& s : m.screens) {
            ordered_json e;
            e["id"] = s.id;
            e["widgets"] = s.widgets.size();
            screens.push_back(std::move(e));
            widget_count += s.widgets.size();
        }
        j["screens"] = std::move(screens);
        j["widget_count"] = widget_count;
        ordered_json bugs = ordered_json::array();
        for (const auto& b : m.bugs) {
            ordered_json e;
            e["id"] = b.id;
            e["kind"] = b.kind == pprobe::BugKind::kCrash ? "crash" : "functional";
            bugs.push_back(std::move(e));
        }
        j["bugs"] = std::move(bugs);
        text = j.dump(2) + "\n";
    });
    if (st != PPR_OK) {
        return st;
    }
    return emit_string(text, out_json);
}

ppr_status ppr_session_run_json(const ppr_model* model, const char* agent_name,
                                int budget_steps, uint64_t seed,
                                char** out_trace_json) {
    if (!model || !agent_name || !out_trace_json) {
        return fail_invalid("model, agent_name, and out_trace_json must not be NULL");
    }
    if (budget_steps < 1) {
        return fail_invalid("budget_steps must be at least 1");
    }
    std::string text;
    const ppr_status st = guarded([&]() {
        const auto persona = persona_for(agent_name);
        auto policy = pprobe::scripted_policy(persona);
        pprobe::SimulatorBackend backend(&model->model);
        pprobe::SessionParams params;
        params.agent_name = agent_name;
        params.persona = persona;
        params.budget.max_steps = budget_steps;
        params.seed = seed;
        const pprobe::Trace trace =
            pprobe::run_session(model->model, backend, *policy, params);
        text = pprobe::trace_to_json_line(trace);
    });
    if (st != PPR_OK) {
        return st;
    }
    return emit_string(text, out_trace_json);
}

ppr_status ppr_campaign_run(const char* config_path,
                            const char* out_dir_override,
                            int* out_failed_sessions) {
    if (!config_path) {
        return fail_invalid("config_path must not be NULL");
    }
    return guarded([&]() {
        pprobe::CampaignConfig cfg = pprobe::load_campaign_config(config_path);
        if (out_dir_override && *out_dir_override) {
            cfg.out_dir = out_dir_override;
        }
        const pprobe::CampaignReport report = pprobe::run_campaign_to_dir(cfg);
        if (out_failed_sessions) {
            *out_failed_sessions = failure_count(report);
        }
    });
}

ppr_status ppr_campaign_run_json_text(const char* config_json,
                                      const char* out_dir_override,
                                      int* out_failed_sessions) {
    if (!config_json) {
        return fail_invalid("config_json must not be NULL");
    }
    return guarded([&]() {
        pprobe::CampaignConfig cfg =
            pprobe::campaign_config_from_json_text(config_json);
        if (out_dir_override && *out_dir_override) {
            cfg.out_dir = out_dir_override;
        }
        const pprobe::CampaignReport report = pprobe::run_campaign_to_dir(cfg);
        if (out_failed_sessions) {
            *out_failed_sessions = failure_count(report);
        }
    });
}

ppr_status ppr_analyze_dir(const char* dir, const char* out_dir_override,
                           int* out_failed_sessions) {
    if (!dir) {
        return fail_invalid("dir must not be NULL");
    }
    return guarded([&]() {
        const std::string out =
            out_dir_override ? std::string(out_dir_override) : std::string();
        const pprobe::CampaignReport report = pprobe::analyze_dir(dir, out);
        if (out_failed_sessions) {
            *out_failed_sessions = failure_count(report);
        }
    });
}

ppr_status ppr_report_render(const char* dir, const char* format,
                             char** out_text) {
    if (!dir || !format || !out_text) {
        return fail_invalid("dir, format, and out_text must not be NULL");
    }
    const std::string fmt = format;
    if (fmt != "json" && fmt != "csv" && fmt != "text") {
        g_last_error = "format must be one of: json, csv, text";
        return PPR_ERR_CONFIG;
    }
    std::string text;
    const ppr_status st = guarded([&]() {
        const std::filesystem::path base(dir);
        const pprobe::CampaignConfig cfg =
            pprobe::load_campaign_config((base / "config.json").string());
        const std::vector<pprobe::Trace> traces =
            pprobe::read_traces_jsonl((base / "traces.jsonl").string());
        const pprobe::CampaignReport report = pprobe::analyze_traces(cfg, traces);
        if (fmt == "json") {
            text = pprobe::report_to_json(cfg, report);
        } else if (fmt == "csv") {
            std::string joined;
            for (const auto& [name, content] :
                 pprobe::report_to_csv_bundle(cfg, report)) {
                joined += "# " + name + "\n" + content;
            }
            text = joined;
        } else {
            text = pprobe::report_summary_text(cfg, report);
        }
    });
    if (st != PPR_OK) {
        return st;
    }
    return emit_string(text, out_text);
}

}  // extern "C"
