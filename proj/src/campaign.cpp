#include "personaprobe/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "json.hpp"
#include "personaprobe/error.hpp"
#include "personaprobe/execution.hpp"
#include "personaprobe/hashing.hpp"
#include "personaprobe/metrics.hpp"

namespace pprobe {

namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void config_error(const std::string& msg) {
    raise(ErrorCode::kConfigError, "campaign config: " + msg);
}

const ordered_json& cfg_need(const ordered_json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) {
        config_error(std::string("missing \"") + key + "\"");
    }
    return *it;
}

std::string cfg_string(const ordered_json& j, const char* key) {
    const ordered_json& v = cfg_need(j, key);
    if (!v.is_string()) {
        config_error(std::string("\"") + key + "\" must be a string");
    }
    return v.get<std::string>();
}

int cfg_int(const ordered_json& j, const char* key) {
    const ordered_json& v = cfg_need(j, key);
    if (!v.is_number_integer()) {
        config_error(std::string("\"") + key + "\" must be an integer");
    }
    return v.get<int>();
}

CampaignConfig parse_config(const ordered_json& j) {
    if (!j.is_object()) {
        config_error("top level must be a JSON object");
    }
    CampaignConfig cfg;

    const ordered_json& apps = cfg_need(j, "apps");
    if (!apps.is_array() || apps.empty()) {
        config_error("\"apps\" must be a non-empty array of model paths");
    }
    for (const auto& a : apps) {
        if (!a.is_string()) {
            config_error("\"apps\" entries must be strings");
        }
        cfg.model_paths.push_back(a.get<std::string>());
    }

    const ordered_json& agents = cfg_need(j, "agents");
    if (!agents.is_array() || agents.empty()) {
        config_error("\"agents\" must be a non-empty array of agent names");
    }
    const PersonaCatalog catalog = PersonaCatalog::standard();
    std::set<std::string> seen_agents;
    for (const auto& a : agents) {
        if (!a.is_string()) {
            config_error("\"agents\" entries must be strings");
        }
        std::string name = a.get<std::string>();
        if (!seen_agents.insert(name).second) {
            config_error("agent \"" + name + "\" is listed twice");
        }
        if (name != kBaselineAgentName) {
            try {
                catalog.lookup(name);
            } catch (const Error&) {
                config_error("unknown agent \"" + name + "\"");
            }
        }
        cfg.agents.push_back(std::move(name));
    }

    if (j.contains("runs_per_config")) {
        cfg.runs_per_config = cfg_int(j, "runs_per_config");
    }
    if (cfg.runs_per_config < 1) {
        config_error("\"runs_per_config\" must be >= 1");
    }
    if (j.contains("baseline_repetitions")) {
        cfg.baseline_repetitions = cfg_int(j, "baseline_repetitions");
    }
    if (cfg.baseline_repetitions < 1) {
        config_error("\"baseline_repetitions\" must be >= 1");
    }

    if (j.contains("budget")) {
        const ordered_json& budget = j["budget"];
        if (!budget.is_object()) {
            config_error("\"budget\" must be an object");
        }
        if (budget.contains("max_steps")) {
            cfg.budget.max_steps = cfg_int(budget, "max_steps");
        }
        if (budget.contains("max_wall_seconds")) {
            cfg.budget.max_wall_seconds = cfg_int(budget, "max_wall_seconds");
        }
    }
    if (cfg.budget.max_steps < 1 || cfg.budget.max_wall_seconds < 1) {
        config_error("budget limits must be >= 1");
    }

    const ordered_json& seed = cfg_need(j, "seed");
    if (!seed.is_number_integer() && !seed.is_number_unsigned()) {
        config_error("\"seed\" must be an integer");
    }
    cfg.seed = seed.get<std::uint64_t>();

    if (j.contains("policy")) {
        cfg.policy = cfg_string(j, "policy");
    }
    if (cfg.policy != "scripted" && cfg.policy != "remote") {
        config_error("\"policy\" must be \"scripted\" or \"remote\"");
    }
    if (cfg.policy == "remote") {
        const ordered_json& remote = cfg_need(j, "remote");
        if (!remote.is_object()) {
            config_error("\"remote\" must be an object");
        }
        cfg.remote.base_url = cfg_string(remote, "base_url");
        cfg.remote.model = cfg_string(remote, "model");
        if (remote.contains("credential_env")) {
            cfg.remote.credential_env = cfg_string(remote, "credential_env");
        }
        if (remote.contains("timeout_seconds")) {
            cfg.remote.timeout_seconds = cfg_int(remote, "timeout_seconds");
        }
        if (cfg.remote.base_url.empty() || cfg.remote.model.empty()) {
            config_error("remote policy needs \"base_url\" and \"model\"");
        }
        if (cfg.remote.timeout_seconds < 1) {
            config_error("\"remote.timeout_seconds\" must be >= 1");
        }
    }

    if (j.contains("out_dir")) {
        cfg.out_dir = cfg_string(j, "out_dir");
    }
    if (cfg.out_dir.empty()) {
        config_error("\"out_dir\" must be non-empty");
    }

    if (j.contains("workers")) {
        cfg.workers = cfg_int(j, "workers");
        if (cfg.workers < 1) {
            config_error("\"workers\" must be >= 1");
        }
    }
    if (j.contains("cache_threshold")) {
        const ordered_json& t = j["cache_threshold"];
        if (!t.is_number()) {
            config_error("\"cache_threshold\" must be a number");
        }
        cfg.cache_threshold = t.get<double>();
        if (!(cfg.cache_threshold > 0.0) || cfg.cache_threshold > 1.0) {
            config_error("\"cache_threshold\" must be in (0, 1]");
        }
    }
    return cfg;
}

}  // namespace

CampaignConfig campaign_config_from_json_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        config_error(std::string("not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

CampaignConfig load_campaign_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(ErrorCode::kIoError, "cannot open config \"" + path + "\"");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return campaign_config_from_json_text(buf.str());
}

std::string campaign_config_to_json(const CampaignConfig& cfg) {
    ordered_json j;
    j["apps"] = cfg.model_paths;
    j["agents"] = cfg.agents;
    j["runs_per_config"] = cfg.runs_per_config;
    j["baseline_repetitions"] = cfg.baseline_repetitions;
    j["budget"] = {{"max_steps", cfg.budget.max_steps},
                   {"max_wall_seconds", cfg.budget.max_wall_seconds}};
    j["seed"] = cfg.seed;
    j["policy"] = cfg.policy;
    if (cfg.policy == "remote") {
        j["remote"] = {{"base_url", cfg.remote.base_url},
                       {"model", cfg.remote.model},
                       {"credential_env", cfg.remote.credential_env},
                       {"timeout_seconds", cfg.remote.timeout_seconds}};
    }
    j["out_dir"] = cfg.out_dir;
    j["workers"] = cfg.workers;
    j["cache_threshold"] = cfg.cache_threshold;
    return j.dump(2) + "\n";
}

namespace {

struct Job {
    std::size_t model_index = 0;
    std::string agent_name;
    std::optional<Persona> persona;
    int run_index = 1;  // 1-based
    std::uint64_t seed = 0;
};

int cell_run_count(const CampaignConfig& cfg, const std::string& agent) {
    if (agent == kBaselineAgentName) {
        return std::max(cfg.runs_per_config, cfg.baseline_repetitions);
    }
    return cfg.runs_per_config;
}

}  // namespace

CampaignResult run_campaign(const CampaignConfig& cfg) {
    std::vector<AppModel> models;
    models.reserve(cfg.model_paths.size());
    std::set<std::string> app_ids;
    for (const std::string& path : cfg.model_paths) {
        models.push_back(load_app_model_file(path));
        if (!app_ids.insert(models.back().app_id).second) {
            raise(ErrorCode::kConfigError,
                  "campaign config: two models share app_id \"" +
                      models.back().app_id + "\"");
        }
    }

    const PersonaCatalog catalog = PersonaCatalog::standard();
    std::vector<Job> jobs;
    for (std::size_t m = 0; m < models.size(); ++m) {
        for (const std::string& agent : cfg.agents) {
            std::optional<Persona> persona;
            if (agent != kBaselineAgentName) {
                persona = catalog.lookup(agent);
            }
            const int n = cell_run_count(cfg, agent);
            for (int run = 1; run <= n; ++run) {
                Job job;
                job.model_index = m;
                job.agent_name = agent;
                job.persona = persona;
                job.run_index = run;
                job.seed = mix_seed(
                    mix_seed(mix_seed(cfg.seed, agent), models[m].app_id),
                    static_cast<std::uint64_t>(run));
                jobs.push_back(std::move(job));
            }
        }
    }

    std::vector<Trace> results(jobs.size());
    std::vector<std::string> errors(jobs.size());
    std::vector<char> failed(jobs.size(), 0);
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) {
                return;
            }
            const Job& job = jobs[i];
            try {
                const AppModel& model = models[job.model_index];
                std::unique_ptr<DecisionPolicy> policy =
                    cfg.policy == "remote" ? remote_policy(cfg.remote)
                                           : scripted_policy(job.persona);
                SimulatorBackend backend(&model);
                SessionParams params;
                params.agent_name = job.agent_name;
                params.persona = job.persona;
                params.budget = cfg.budget;
                params.seed = job.seed;
                params.run_index = job.run_index;
                params.cache_threshold = cfg.cache_threshold;
                params.measure_wall_time = (cfg.policy == "remote");
                results[i] = run_session(model, backend, *policy, params);
            } catch (const std::exception& e) {
                failed[i] = 1;
                errors[i] = e.what();
            } catch (...) {
                failed[i] = 1;
                errors[i] = "unknown error";
            }
        }
    };

    const std::size_t n_workers = std::min<std::size_t>(
        static_cast<std::size_t>(cfg.workers), std::max<std::size_t>(jobs.size(), 1));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t t = 0; t < n_workers; ++t) {
            pool.emplace_back(worker);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }

    CampaignResult out;
    out.traces.reserve(jobs.size());
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (failed[i]) {
            out.failures.push_back({jobs[i].agent_name,
                                    models[jobs[i].model_index].app_id,
                                    jobs[i].run_index, errors[i]});
        } else {
            out.traces.push_back(std::move(results[i]));
        }
    }
    return out;
}

namespace {

std::vector<std::string> set_to_vector(const std::set<std::string>& s) {
    return {s.begin(), s.end()};
}

std::vector<std::string> set_difference_sorted(const std::set<std::string>& a,
                                               const std::set<std::string>& b) {
    std::vector<std::string> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
    return out;
}

}  // namespace

CampaignReport analyze_traces(const CampaignConfig& cfg,
                              const std::vector<Trace>& traces) {
    CampaignReport report;
    report.agent_order = cfg.agents;

    // Group in first-appearance order; traces arrive app -> agent -> run.
    std::map<std::string, std::map<std::string, std::vector<const Trace*>>> cells;
    for (const Trace& t : traces) {
        if (!cells.count(t.app_id)) {
            report.app_order.push_back(t.app_id);
        }
        cells[t.app_id][t.agent_name].push_back(&t);
    }

    // Encoded paths per cell for the similarity runs.
    std::map<std::string, std::map<std::string, std::vector<std::vector<double>>>>
        encoded;

    for (const std::string& app : report.app_order) {
        for (const std::string& agent : report.agent_order) {
            auto it = cells[app].find(agent);
            if (it == cells[app].end()) {
                continue;
            }
            const std::vector<const Trace*>& runs = it->second;
            AgentAppStats stats;
            stats.runs = static_cast<int>(runs.size());

            const std::size_t sim_n = std::min<std::size_t>(
                runs.size(), static_cast<std::size_t>(cfg.runs_per_config));

            std::vector<std::vector<double>> paths;
            double general_sum = 0.0;
            double input_sum = 0.0;
            int input_cells = 0;
            for (std::size_t r = 0; r < sim_n; ++r) {
                const Trace& t = *runs[r];
                const std::vector<std::string> phrases = purify(t);
                if (!phrases.empty()) {
                    std::vector<std::vector<double>> embedded;
                    embedded.reserve(phrases.size());
                    for (const std::string& phrase : phrases) {
                        embedded.push_back(embed_phrase(phrase));
                    }
                    paths.push_back(encode_path(embedded));
                }
                EffectivenessStats eff = effectiveness(t);
                general_sum += eff.general_ratio;
                if (eff.input_ratio) {
                    input_sum += *eff.input_ratio;
                    ++input_cells;
                }
            }
            if (sim_n > 0) {
                stats.effectiveness_general = general_sum / static_cast<double>(sim_n);
            }
            if (input_cells > 0) {
                stats.effectiveness_input = input_sum / input_cells;
            }
            if (paths.size() >= 2) {
                stats.cohesion = cohesion(paths);
            }

            const std::size_t bug_n =
                agent == kBaselineAgentName
                    ? std::min<std::size_t>(
                          runs.size(),
                          static_cast<std::size_t>(cfg.baseline_repetitions))
                    : sim_n;
            std::set<std::string> bugs;
            for (std::size_t r = 0; r < bug_n; ++r) {
                bugs.insert(runs[r]->triggered_bugs.begin(),
                            runs[r]->triggered_bugs.end());
            }
            stats.bugs = set_to_vector(bugs);

            encoded[app][agent] = std::move(paths);
            report.stats[app][agent] = std::move(stats);
        }
    }

    // Separation: every ordered pair that has paths on both sides.
    for (const std::string& app : report.app_order) {
        for (const std::string& a : report.agent_order) {
            if (!report.stats[app].count(a)) {
                continue;
            }
            for (const std::string& b : report.agent_order) {
                if (a == b || !report.stats[app].count(b)) {
                    continue;
                }
                const auto& pa = encoded[app][a];
                const auto& pb = encoded[app][b];
                if (pa.empty() || pb.empty()) {
                    continue;
                }
                report.stats[app][a].separation[b] = separation(pa, pb);
            }
        }
    }

    // Bug set algebra per app and overall.
    std::set<std::string> overall_persona;
    std::set<std::string> overall_baseline;
    for (const std::string& app : report.app_order) {
        std::set<std::string> persona_union;
        std::set<std::string> baseline_union;
        for (const std::string& agent : report.agent_order) {
            auto it = report.stats[app].find(agent);
            if (it == report.stats[app].end()) {
                continue;
            }
            auto& target =
                agent == kBaselineAgentName ? baseline_union : persona_union;
            target.insert(it->second.bugs.begin(), it->second.bugs.end());
        }
        BugAnalysis ba;
        ba.persona_union = set_to_vector(persona_union);
        ba.baseline_union = set_to_vector(baseline_union);
        ba.persona_only = set_difference_sorted(persona_union, baseline_union);
        ba.baseline_only = set_difference_sorted(baseline_union, persona_union);
        report.per_app_bugs[app] = std::move(ba);
        overall_persona.insert(persona_union.begin(), persona_union.end());
        overall_baseline.insert(baseline_union.begin(), baseline_union.end());
    }
    report.overall_bugs.persona_union = set_to_vector(overall_persona);
    report.overall_bugs.baseline_union = set_to_vector(overall_baseline);
    report.overall_bugs.persona_only =
        set_difference_sorted(overall_persona, overall_baseline);
    report.overall_bugs.baseline_only =
        set_difference_sorted(overall_baseline, overall_persona);

    for (const Trace& t : traces) {
        if (t.end_reason == "policy_failure") {
            report.session_failures.push_back(
                {t.agent_name, t.app_id, t.run_index,
                 "session ended by policy failure"});
        }
    }
    return report;
}

namespace {

ordered_json bug_analysis_json(const BugAnalysis& ba) {
    ordered_json j;
    j["persona_union"] = ba.persona_union;
    j["baseline_union"] = ba.baseline_union;
    j["persona_only"] = ba.persona_only;
    j["baseline_only"] = ba.baseline_only;
    return j;
}

std::string fmt_double(double v) { return ordered_json(v).dump(); }

}  // namespace

std::string report_to_json(const CampaignConfig& cfg, const CampaignReport& report) {
    ordered_json j;
    j["runs_per_config"] = cfg.runs_per_config;
    j["baseline_repetitions"] = cfg.baseline_repetitions;
    j["seed"] = cfg.seed;
    j["policy"] = cfg.policy;

    ordered_json apps = ordered_json::object();
    for (const std::string& app : report.app_order) {
        ordered_json agents = ordered_json::object();
        for (const std::string& agent : report.agent_order) {
            auto it = report.stats.at(app).find(agent);
            if (it == report.stats.at(app).end()) {
                continue;
            }
            const AgentAppStats& s = it->second;
            ordered_json a;
            a["runs"] = s.runs;
            a["cohesion"] = s.cohesion ? ordered_json(*s.cohesion)
                                       : ordered_json(nullptr);
            a["effectiveness"] = {
                {"general", s.effectiveness_general},
                {"input", s.effectiveness_input
                              ? ordered_json(*s.effectiveness_input)
                              : ordered_json(nullptr)},
            };
            ordered_json sep = ordered_json::object();
            for (const std::string& other : report.agent_order) {
                auto sit = s.separation.find(other);
                if (sit != s.separation.end()) {
                    sep[other] = sit->second;
                }
            }
            a["separation"] = sep;
            a["bugs"] = s.bugs;
            agents[agent] = std::move(a);
        }
        ordered_json entry;
        entry["agents"] = std::move(agents);
        entry["bug_analysis"] = bug_analysis_json(report.per_app_bugs.at(app));
        apps[app] = std::move(entry);
    }
    j["apps"] = std::move(apps);
    j["overall"] = {{"bug_analysis", bug_analysis_json(report.overall_bugs)}};
    ordered_json failures = ordered_json::array();
    for (const SessionFailure& f : report.session_failures) {
        ordered_json e;
        e["agent"] = f.agent;
        e["app"] = f.app_id;
        e["run_index"] = f.run_index;
        e["message"] = f.message;
        failures.push_back(std::move(e));
    }
    j["session_failures"] = std::move(failures);
    return j.dump(2) + "\n";
}

std::vector<std::pair<std::string, std::string>> report_to_csv_bundle(
    const CampaignConfig& cfg, const CampaignReport& report) {
    (void)cfg;
    std::ostringstream similarity;
    std::ostringstream effectiveness;
    std::ostringstream bugs;
    similarity << "agent,app,metric,value\n";
    effectiveness << "agent,app,metric,value\n";
    bugs << "agent,app,metric,value\n";
    for (const std::string& app : report.app_order) {
        for (const std::string& agent : report.agent_order) {
            auto it = report.stats.at(app).find(agent);
            if (it == report.stats.at(app).end()) {
                continue;
            }
            const AgentAppStats& s = it->second;
            if (s.cohesion) {
                similarity << agent << ',' << app << ",cohesion,"
                           << fmt_double(*s.cohesion) << '\n';
            }
            for (const std::string& other : report.agent_order) {
                auto sit = s.separation.find(other);
                if (sit != s.separation.end()) {
                    similarity << agent << ',' << app << ",separation_vs_" << other
                               << ',' << fmt_double(sit->second) << '\n';
                }
            }
            effectiveness << agent << ',' << app << ",effectiveness_general,"
                          << fmt_double(s.effectiveness_general) << '\n';
            if (s.effectiveness_input) {
                effectiveness << agent << ',' << app << ",effectiveness_input,"
                              << fmt_double(*s.effectiveness_input) << '\n';
            }
            for (const std::string& bug : s.bugs) {
                bugs << agent << ',' << app << ",bug_triggered:" << bug << ",1\n";
            }
        }
    }
    return {{"similarity.csv", similarity.str()},
            {"effectiveness.csv", effectiveness.str()},
            {"bugs.csv", bugs.str()}};
}

std::string report_summary_text(const CampaignConfig& cfg,
                                const CampaignReport& report) {
    std::ostringstream out;
    out << "campaign summary (policy: " << cfg.policy << ", seed: " << cfg.seed
        << ", runs per cell: " << cfg.runs_per_config
        << ", baseline repetitions: " << cfg.baseline_repetitions << ")\n";
    for (const std::string& app : report.app_order) {
        out << "\napp " << app << "\n";
        out << "  agent        cohesion  eff(general)  eff(input)  bugs\n";
        for (const std::string& agent : report.agent_order) {
            auto it = report.stats.at(app).find(agent);
            if (it == report.stats.at(app).end()) {
                continue;
            }
            const AgentAppStats& s = it->second;
            out << "  " << agent;
            for (std::size_t pad = agent.size(); pad < 13; ++pad) {
                out << ' ';
            }
            out << (s.cohesion ? fmt_double(*s.cohesion) : std::string("-"));
            out << "  " << fmt_double(s.effectiveness_general);
            out << "  "
                << (s.effectiveness_input ? fmt_double(*s.effectiveness_input)
                                          : std::string("-"));
            out << "  ";
            if (s.bugs.empty()) {
                out << "-";
            } else {
                for (std::size_t i = 0; i < s.bugs.size(); ++i) {
                    if (i > 0) {
                        out << ' ';
                    }
                    out << s.bugs[i];
                }
            }
            out << "\n";
        }
        const BugAnalysis& ba = report.per_app_bugs.at(app);
        out << "  persona bug union: " << ba.persona_union.size()
            << ", baseline bug union: " << ba.baseline_union.size()
            << ", persona-only: " << ba.persona_only.size()
            << ", baseline-only: " << ba.baseline_only.size() << "\n";
    }
    out << "\noverall persona-only bugs:";
    if (report.overall_bugs.persona_only.empty()) {
        out << " (none)";
    } else {
        for (const std::string& bug : report.overall_bugs.persona_only) {
            out << ' ' << bug;
        }
    }
    out << "\noverall baseline-only bugs:";
    if (report.overall_bugs.baseline_only.empty()) {
        out << " (none)";
    } else {
        for (const std::string& bug : report.overall_bugs.baseline_only) {
            out << ' ' << bug;
        }
    }
    out << "\n";
    if (!report.session_failures.empty()) {
        out << "session failures: " << report.session_failures.size() << "\n";
        for (const SessionFailure& f : report.session_failures) {
            out << "  " << f.agent << " on " << f.app_id << " run " << f.run_index
                << ": " << f.message << "\n";
        }
    }
    return out.str();
}

namespace {

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        raise(ErrorCode::kIoError, "cannot open \"" + path.string() + "\" for writing");
    }
    out << text;
    if (!out) {
        raise(ErrorCode::kIoError, "failed while writing \"" + path.string() + "\"");
    }
}

void write_derived_outputs(const std::filesystem::path& dir,
                           const CampaignConfig& cfg,
                           const CampaignReport& report) {
    std::filesystem::create_directories(dir / "csv");
    write_text_file(dir / "report.json", report_to_json(cfg, report));
    for (const auto& [name, content] : report_to_csv_bundle(cfg, report)) {
        write_text_file(dir / "csv" / name, content);
    }
    write_text_file(dir / "summary.txt", report_summary_text(cfg, report));
}

}  // namespace

void write_campaign_outputs(const CampaignConfig& cfg,
                            const std::vector<Trace>& traces,
                            const CampaignReport& report) {
    const std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    write_text_file(dir / "config.json", campaign_config_to_json(cfg));
    write_traces_jsonl((dir / "traces.jsonl").string(), traces);
    write_derived_outputs(dir, cfg, report);
}

CampaignReport run_campaign_to_dir(const CampaignConfig& cfg) {
    CampaignResult result = run_campaign(cfg);
    CampaignReport report = analyze_traces(cfg, result.traces);
    // analyze_traces only sees policy failures that left a trace behind;
    // prepend the jobs that threw so the report shows every failed session.
    report.session_failures.insert(report.session_failures.begin(),
                                   result.failures.begin(),
                                   result.failures.end());
    std::stable_sort(report.session_failures.begin(),
                     report.session_failures.end(),
                     [](const SessionFailure& a, const SessionFailure& b) {
                         return std::tie(a.app_id, a.agent, a.run_index) <
                                std::tie(b.app_id, b.agent, b.run_index);
                     });
    write_campaign_outputs(cfg, result.traces, report);
    return report;
}

CampaignReport analyze_dir(const std::string& dir, const std::string& out_dir) {
    const std::filesystem::path base(dir);
    CampaignConfig cfg = load_campaign_config((base / "config.json").string());
    std::vector<Trace> traces = read_traces_jsonl((base / "traces.jsonl").string());
    CampaignReport report = analyze_traces(cfg, traces);
    write_derived_outputs(out_dir.empty() ? base : std::filesystem::path(out_dir),
                          cfg, report);
    return report;
}

}  // namespace pprobe
