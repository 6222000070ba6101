#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "personaprobe/agent.hpp"
#include "personaprobe/session.hpp"
#include "personaprobe/trace.hpp"

// Multi-agent, multi-app experiment harness: schedules every
// (agent, app, run) cell, aggregates similarity / effectiveness / bug
// metrics, and writes a reproducible output bundle.

namespace pprobe {

struct CampaignConfig {
    std::vector<std::string> model_paths;  // app model JSON files, in order
    std::vector<std::string> agents;       // catalog names + "P_X"
    int runs_per_config = 5;
    int baseline_repetitions = 9;
    Budget budget;
    std::uint64_t seed = 0;
    std::string policy = "scripted";  // "scripted" | "remote"
    RemotePolicyConfig remote;
    std::string out_dir = "out";
    int workers = 1;
    double cache_threshold = kCacheThreshold;
};

// Parses and validates a config file. Unknown agent names, an unknown
// policy, or out-of-range numbers raise Error(kConfigError).
CampaignConfig load_campaign_config(const std::string& path);
CampaignConfig campaign_config_from_json_text(const std::string& text);
std::string campaign_config_to_json(const CampaignConfig& cfg);

struct AgentAppStats {
    int runs = 0;  // sessions executed for this cell
    std::optional<double> cohesion;       // over the first runs_per_config runs
    double effectiveness_general = 0.0;   // mean over the same runs
    std::optional<double> effectiveness_input;  // mean over runs with inputs
    // Mean cross-run separation against every other agent on this app.
    std::map<std::string, double> separation;
    std::vector<std::string> bugs;  // sorted union over the runs that count
};

struct BugAnalysis {
    std::vector<std::string> persona_union;
    std::vector<std::string> baseline_union;
    std::vector<std::string> persona_only;
    std::vector<std::string> baseline_only;
};

// One scheduled session that did not complete normally: either the session
// loop gave up (trace ends with "policy_failure") or the job itself threw
// (no trace at all, e.g. a remote-policy network error).
struct SessionFailure {
    std::string agent;
    std::string app_id;
    int run_index = 0;
    std::string message;
};

struct CampaignReport {
    std::vector<std::string> app_order;
    std::vector<std::string> agent_order;
    std::map<std::string, std::map<std::string, AgentAppStats>> stats;  // app -> agent
    std::map<std::string, BugAnalysis> per_app_bugs;
    BugAnalysis overall_bugs;
    std::vector<SessionFailure> session_failures;
};

struct CampaignResult {
    std::vector<Trace> traces;
    // Jobs that threw instead of producing a trace. Scripted campaigns
    // never populate this; remote campaigns can (network, credentials).
    std::vector<SessionFailure> failures;
};

// Executes every scheduled session (workers in parallel, results assembled
// in schedule order) and returns the traces ordered app -> agent -> run.
// The baseline agent runs max(runs_per_config, baseline_repetitions)
// sessions; personas run runs_per_config. A throwing job is recorded as a
// failure and the remaining sessions still run.
CampaignResult run_campaign(const CampaignConfig& cfg);

// Pure aggregation over already-collected traces. Similarity and
// effectiveness use the first runs_per_config runs per cell; the baseline's
// bug union uses the first baseline_repetitions runs. Traces that ended in
// "policy_failure" are listed under session_failures.
CampaignReport analyze_traces(const CampaignConfig& cfg,
                              const std::vector<Trace>& traces);

std::string report_to_json(const CampaignConfig& cfg, const CampaignReport& report);
// One CSV table per file, fixed "agent,app,metric,value" header:
// similarity.csv, effectiveness.csv, bugs.csv (in that order).
std::vector<std::pair<std::string, std::string>> report_to_csv_bundle(
    const CampaignConfig& cfg, const CampaignReport& report);
std::string report_summary_text(const CampaignConfig& cfg,
                                const CampaignReport& report);

// Writes config.json, traces.jsonl, report.json, csv/<table>.csv, and
// summary.txt into cfg.out_dir (created if needed).
void write_campaign_outputs(const CampaignConfig& cfg,
                            const std::vector<Trace>& traces,
                            const CampaignReport& report);

// run_campaign + analyze + write, returning the report.
CampaignReport run_campaign_to_dir(const CampaignConfig& cfg);

// Re-derives report.json / csv / summary.txt from an existing bundle's
// config.json + traces.jsonl. Unchanged traces give byte-identical outputs.
// The derived files go to out_dir when non-empty, otherwise back into dir.
CampaignReport analyze_dir(const std::string& dir,
                           const std::string& out_dir = "");

}  // namespace pprobe
