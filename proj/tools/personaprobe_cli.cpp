// personaprobe command-line front end. Talks to the engine exclusively
// through the C API in personaprobe.h.
//
// Exit codes: 0 success; 1 configuration or validation error; 2 the
// campaign ran but some sessions failed (the output bundle is still
// written).

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "personaprobe.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSessionFailures = 2;

int report_error(const char* what) {
    std::fprintf(stderr, "personaprobe: %s: %s\n", what, ppr_last_error());
    return kExitConfig;
}

std::vector<std::string> default_agents() {
    std::vector<std::string> agents;
    char* catalog = nullptr;
    if (ppr_catalog_json(&catalog) != PPR_OK) {
        return agents;
    }
    const auto parsed = nlohmann::json::parse(catalog, nullptr, false);
    ppr_string_free(catalog);
    if (parsed.is_array()) {
        for (const auto& entry : parsed) {
            if (entry.contains("name") && entry["name"].is_string()) {
                agents.push_back(entry["name"].get<std::string>());
            }
        }
    }
    return agents;
}

int run_with_failures(ppr_status st, int failed, const char* what) {
    if (st != PPR_OK) {
        return report_error(what);
    }
    if (failed > 0) {
        std::fprintf(stderr, "personaprobe: %d session(s) failed; see the report\n",
                     failed);
        return kExitSessionFailures;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"persona-guided GUI-testing campaigns on simulated apps"};
    app.require_subcommand(1);

    // ---- run ----
    auto* run = app.add_subcommand("run", "execute a testing campaign");
    std::string run_config;
    std::vector<std::string> run_apps;
    std::vector<std::string> run_agents;
    int run_runs = 5;
    std::uint64_t run_seed = 42;
    std::string run_policy = "scripted";
    int run_budget_steps = 40;
    std::string run_out;
    run->add_option("--config", run_config, "campaign config JSON file");
    run->add_option("--app", run_apps, "app model JSON file (repeatable)");
    run->add_option("--agents", run_agents,
                    "agent names, e.g. P_A,P_B,P_X (default: full catalog)")
        ->delimiter(',');
    run->add_option("--runs", run_runs, "runs per agent/app cell");
    run->add_option("--seed", run_seed, "campaign seed");
    run->add_option("--policy", run_policy, "decision policy: scripted | remote");
    run->add_option("--budget-steps", run_budget_steps, "step budget per session");
    run->add_option("--out", run_out, "output directory (default: out)");

    // ---- analyze ----
    auto* analyze = app.add_subcommand(
        "analyze", "recompute the report from stored traces");
    std::string analyze_traces_dir;
    std::string analyze_out;
    analyze->add_option("--traces", analyze_traces_dir,
                        "bundle directory holding config.json + traces.jsonl")
        ->required();
    analyze->add_option("--out", analyze_out,
                        "directory for the derived files (default: in place)");

    // ---- report ----
    auto* report = app.add_subcommand("report", "print a stored report");
    std::string report_dir = "out";
    std::string report_format = "text";
    report->add_option("--dir", report_dir, "bundle directory (default: out)");
    report->add_option("--format", report_format, "output format: json | csv | text");

    // ---- validate-model ----
    auto* validate = app.add_subcommand("validate-model", "check an app model file");
    std::string validate_app;
    validate->add_option("--app", validate_app, "app model JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        int failed = 0;
        if (!run_config.empty()) {
            const ppr_status st = ppr_campaign_run(
                run_config.c_str(), run_out.empty() ? nullptr : run_out.c_str(),
                &failed);
            return run_with_failures(st, failed, "run");
        }
        if (run_apps.empty()) {
            std::fprintf(stderr,
                         "personaprobe: run needs --config or at least one --app\n");
            return kExitConfig;
        }
        if (run_agents.empty()) {
            run_agents = default_agents();
        }
        nlohmann::ordered_json cfg;
        cfg["apps"] = run_apps;
        cfg["agents"] = run_agents;
        cfg["runs_per_config"] = run_runs;
        cfg["seed"] = run_seed;
        cfg["policy"] = run_policy;
        cfg["budget"] = {{"max_steps", run_budget_steps}};
        cfg["out_dir"] = run_out.empty() ? "out" : run_out;
        const ppr_status st =
            ppr_campaign_run_json_text(cfg.dump().c_str(), nullptr, &failed);
        return run_with_failures(st, failed, "run");
    }

    if (analyze->parsed()) {
        int failed = 0;
        const ppr_status st = ppr_analyze_dir(
            analyze_traces_dir.c_str(),
            analyze_out.empty() ? nullptr : analyze_out.c_str(), &failed);
        return run_with_failures(st, failed, "analyze");
    }

    if (report->parsed()) {
        char* text = nullptr;
        const ppr_status st =
            ppr_report_render(report_dir.c_str(), report_format.c_str(), &text);
        if (st != PPR_OK) {
            return report_error("report");
        }
        std::fputs(text, stdout);
        ppr_string_free(text);
        return kExitOk;
    }

    if (validate->parsed()) {
        char* problems_json = nullptr;
        const ppr_status st =
            ppr_model_validate_file(validate_app.c_str(), &problems_json);
        if (st != PPR_OK) {
            return report_error("validate-model");
        }
        const auto problems = nlohmann::json::parse(problems_json, nullptr, false);
        ppr_string_free(problems_json);
        if (!problems.is_array()) {
            std::fprintf(stderr, "personaprobe: validate-model: bad response\n");
            return kExitConfig;
        }
        if (problems.empty()) {
            std::printf("%s: ok\n", validate_app.c_str());
            return kExitOk;
        }
        for (const auto& p : problems) {
            std::fprintf(stderr, "%s: %s\n", validate_app.c_str(),
                         p.get<std::string>().c_str());
        }
        return kExitConfig;
    }

    return kExitConfig;
}
