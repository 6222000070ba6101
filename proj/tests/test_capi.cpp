// Exercises the shared library strictly through its C interface, the way an
// external embedder would. Prints one PASS/FAIL line per check and exits
// with the number of failures.

#include "personaprobe.h"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int g_failures = 0;

void check(bool ok, const std::string& what) {
    std::printf("%s: %s\n", ok ? "PASS" : "FAIL", what.c_str());
    if (!ok) {
        ++g_failures;
    }
}

std::string take_string(char* s) {
    std::string out = s ? s : "";
    ppr_string_free(s);
    return out;
}

std::string model_path(const char* name) {
    return std::string(PPROBE_SOURCE_DIR "/models/") + name;
}

fs::path fresh_dir(const char* leaf) {
    const fs::path dir = fs::temp_directory_path() / "pprobe_capi_tests" / leaf;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void check_catalog() {
    char* text = nullptr;
    check(ppr_catalog_json(&text) == PPR_OK, "catalog call succeeds");
    const json catalog = json::parse(take_string(text), nullptr, false);
    check(catalog.is_array() && catalog.size() == 10,
          "catalog lists nine personas plus the baseline");
    bool found_pa = false;
    bool found_base = false;
    for (const auto& e : catalog) {
        if (e["name"] == "P_A") {
            found_pa = e["code"] == "A.a.i" && e["baseline"] == false;
        }
        if (e["name"] == "P_X") {
            found_base = e["code"].is_null() && e["baseline"] == true;
        }
    }
    check(found_pa, "catalog entry P_A carries code A.a.i");
    check(found_base, "baseline entry has a null code and baseline=true");
    check(ppr_catalog_json(nullptr) == PPR_ERR_INVALID_ARGUMENT,
          "catalog rejects a NULL out-parameter");
}

void check_persona_prompt() {
    char* text = nullptr;
    check(ppr_persona_prompt("P_B", &text) == PPR_OK, "persona prompt for P_B");
    const std::string prompt = take_string(text);
    check(!prompt.empty(), "P_B prompt is non-empty");

    text = nullptr;
    check(ppr_persona_prompt("P_X", &text) == PPR_OK, "persona prompt for P_X");
    check(take_string(text).empty(), "baseline prompt block is empty");

    text = nullptr;
    check(ppr_persona_prompt("P_Q", &text) == PPR_ERR_UNKNOWN_AGENT_NAME,
          "unknown agent name is reported as such");
    check(std::strlen(ppr_last_error()) > 0,
          "last-error message is populated after a failure");
    check(ppr_persona_prompt(nullptr, &text) == PPR_ERR_INVALID_ARGUMENT,
          "NULL agent name is an invalid argument");
}

void check_models() {
    ppr_model* model = nullptr;
    check(ppr_model_load(model_path("alarm_clock.json").c_str(), &model) ==
              PPR_OK,
          "shipped model loads");
    char* text = nullptr;
    check(ppr_model_summary_json(model, &text) == PPR_OK, "model summary call");
    const json summary = json::parse(take_string(text), nullptr, false);
    check(summary["app_id"] == "alarm_clock", "summary names the app");
    check(summary["screens"].is_array() && summary["screens"].size() >= 2,
          "summary lists the screens");
    check(summary["bugs"].is_array() && !summary["bugs"].empty(),
          "summary lists the seeded bugs");

    text = nullptr;
    check(ppr_session_run_json(model, "P_B", 6, 42, &text) == PPR_OK,
          "one scripted session runs through the C interface");
    const json trace = json::parse(take_string(text), nullptr, false);
    check(trace["agent"] == "P_B", "trace carries the agent name");
    check(trace["events"].is_array() && trace["events"].size() <= 6,
          "trace respects the step budget");
    check(trace["end_reason"].is_string(), "trace carries an end reason");

    text = nullptr;
    check(ppr_session_run_json(model, "P_B", 0, 42, &text) ==
              PPR_ERR_INVALID_ARGUMENT,
          "a zero step budget is rejected");
    check(ppr_session_run_json(model, "P_Q", 6, 42, &text) ==
              PPR_ERR_UNKNOWN_AGENT_NAME,
          "sessions reject unknown agent names");
    ppr_model_free(model);

    model = nullptr;
    check(ppr_model_load("/nonexistent/model.json", &model) == PPR_ERR_IO,
          "loading a missing model file reports an I/O error");
    check(ppr_model_load(nullptr, &model) == PPR_ERR_INVALID_ARGUMENT,
          "NULL model path is an invalid argument");
    ppr_model_free(nullptr);  // must be a no-op
}

void check_validation() {
    char* text = nullptr;
    check(ppr_model_validate_file(model_path("sticky_notes.json").c_str(),
                                  &text) == PPR_OK,
          "validation call on a shipped model");
    const json clean = json::parse(take_string(text), nullptr, false);
    check(clean.is_array() && clean.empty(), "shipped model has no problems");

    const fs::path dir = fresh_dir("validate");
    const fs::path bad = dir / "bad.json";
    {
        std::ofstream out(bad);
        out << R"({"app_id": "b", "core_task": "t", "entry_screen": "s",
                   "screens": [{"id": "s", "widgets": [
                     {"id": "w", "kind": "button", "label": "x",
                      "bounds": [0, 0, 10, 10],
                      "actions": {"click": [{"type": "goto", "target": "gone"}]}}
                   ]}]})";
    }
    text = nullptr;
    check(ppr_model_validate_file(bad.string().c_str(), &text) == PPR_OK,
          "validation of a broken model still succeeds as a call");
    const json problems = json::parse(take_string(text), nullptr, false);
    check(problems.is_array() && !problems.empty(),
          "broken model yields a non-empty problem list");

    text = nullptr;
    check(ppr_model_validate_file("/nonexistent/model.json", &text) == PPR_OK,
          "validating a missing file reports through the problem list");
    const json missing = json::parse(take_string(text), nullptr, false);
    check(missing.is_array() && !missing.empty(),
          "missing file shows up as a problem entry");
}

void check_campaigns() {
    const fs::path out = fresh_dir("campaign");
    const std::string config = std::string("{\"apps\": [\"") +
                               model_path("alarm_clock.json") +
                               "\"], \"agents\": [\"P_A\", \"P_X\"], "
                               "\"runs_per_config\": 2, "
                               "\"baseline_repetitions\": 2, "
                               "\"budget\": {\"max_steps\": 5}, \"seed\": 12, "
                               "\"out_dir\": \"" +
                               out.string() + "\"}";
    int failed = -1;
    check(ppr_campaign_run_json_text(config.c_str(), nullptr, &failed) == PPR_OK,
          "campaign from config text runs");
    check(failed == 0, "scripted campaign reports zero failed sessions");
    check(fs::exists(out / "report.json"), "campaign wrote report.json");
    check(fs::exists(out / "traces.jsonl"), "campaign wrote traces.jsonl");

    // The same config from a file, redirected by the out-dir override.
    const fs::path redirected = fresh_dir("campaign_redirect");
    const fs::path cfg_file = fresh_dir("campaign_cfg") / "config.json";
    {
        std::ofstream f(cfg_file);
        f << config;
    }
    failed = -1;
    check(ppr_campaign_run(cfg_file.string().c_str(),
                           redirected.string().c_str(), &failed) == PPR_OK,
          "campaign from a config file honors the out-dir override");
    check(fs::exists(redirected / "report.json"),
          "override directory received the bundle");

    failed = -1;
    check(ppr_analyze_dir(out.string().c_str(), nullptr, &failed) == PPR_OK,
          "analyze-in-place over the stored bundle");
    check(failed == 0, "analysis reports zero failed sessions");

    char* text = nullptr;
    check(ppr_report_render(out.string().c_str(), "json", &text) == PPR_OK,
          "render report as json");
    const json report = json::parse(take_string(text), nullptr, false);
    check(report.contains("apps") && report.contains("session_failures"),
          "json report has the expected top-level keys");

    text = nullptr;
    check(ppr_report_render(out.string().c_str(), "csv", &text) == PPR_OK,
          "render report as csv");
    const std::string csv = take_string(text);
    check(csv.find("# similarity.csv") != std::string::npos &&
              csv.find("# effectiveness.csv") != std::string::npos &&
              csv.find("# bugs.csv") != std::string::npos,
          "csv rendering contains all three labeled tables");

    text = nullptr;
    check(ppr_report_render(out.string().c_str(), "text", &text) == PPR_OK,
          "render report as text");
    check(take_string(text).find("campaign summary") != std::string::npos,
          "text rendering is the human summary");

    text = nullptr;
    check(ppr_report_render(out.string().c_str(), "xml", &text) ==
              PPR_ERR_CONFIG,
          "unknown render format is a config error");
    check(ppr_campaign_run(nullptr, nullptr, &failed) ==
              PPR_ERR_INVALID_ARGUMENT,
          "NULL config path is an invalid argument");
    check(ppr_campaign_run("/nonexistent/config.json", nullptr, &failed) ==
              PPR_ERR_IO,
          "missing config file is an I/O error");
}

}  // namespace

int main() {
    check(ppr_version() != nullptr && std::strlen(ppr_version()) > 0,
          "version string is available");
    ppr_string_free(nullptr);  // must be a no-op

    check_catalog();
    check_persona_prompt();
    check_models();
    check_validation();
    check_campaigns();

    std::printf("%s: %d check(s) failed\n", g_failures == 0 ? "OK" : "FAILED",
                g_failures);
    return g_failures;
}
