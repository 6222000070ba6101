#include "personaprobe/session.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "personaprobe/error.hpp"
#include "personaprobe/metrics.hpp"

namespace pprobe {

namespace {

DecisionRecord make_record(int step, const TestOperation& op,
                           const GuiStateDoc& doc, const RawGuiSnapshot& snapshot,
                           const StepOutcome& out, const IntentVerdict& verdict,
                           const BugFindings& findings) {
    DecisionRecord r;
    r.step_index = step;
    r.gui_doc_signature = doc.signature;
    r.operation = op;

    if (op.action == ActionType::kScroll) {
        r.target_kind = WidgetKind::kButton;
        r.target_label.clear();
        r.target_bounds = Bounds{0, 0, 0, 0};
    } else if (const SnapWidget* w = snapshot.find(op.target_widget_id)) {
        r.target_kind = w->kind;
        r.target_label = w->label;
        r.target_bounds = w->bounds;
    } else {
        const DocRecord& rec = doc.records[static_cast<std::size_t>(op.target_ref)];
        r.target_kind = parse_widget_kind(rec.type);
        r.target_label = rec.label;
        r.target_bounds = rec.bounds;
    }
    r.purified_phrase = purify_phrase(op.action, r.target_kind, r.target_label,
                                      r.target_bounds, op.params.direction);
    r.screen_id = snapshot.screen_id;

    r.outcome.accepted = out.accepted;
    r.outcome.state_changed = out.state_changed;
    r.outcome.input_stored = out.input_stored;
    r.outcome.intent_fulfilled = verdict.fulfilled;
    r.outcome.verdict_reason = verdict.reason;

    std::set<std::string> bugs;
    bugs.insert(findings.crashes.begin(), findings.crashes.end());
    bugs.insert(findings.functional.begin(), findings.functional.end());
    r.outcome.bugs.assign(bugs.begin(), bugs.end());
    for (const AnomalyFinding& a : findings.anomalies) {
        r.outcome.anomalies.push_back("ref " + std::to_string(a.ref) + ": " +
                                      a.description);
    }
    return r;
}

}  // namespace

Trace run_session(const AppModel& app, ExecutionBackend& backend,
                  DecisionPolicy& policy, const SessionParams& params) {
    const auto started = std::chrono::steady_clock::now();

    backend.reset(params.seed);

    SessionContext ctx;
    ctx.app_id = app.app_id;
    ctx.task = params.task.empty() ? app.core_task : params.task;
    ctx.agent_name = params.agent_name;
    ctx.persona = params.persona;
    ctx.budget = params.budget;
    ctx.seed = params.seed;

    PersistenceCache cache(params.cache_threshold);
    std::set<std::string> triggered;
    std::string end_reason = "budget";

    for (int step = 0; step < params.budget.max_steps; ++step) {
        if (params.measure_wall_time) {
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              started)
                    .count();
            if (elapsed >= params.budget.max_wall_seconds) {
                break;  // end_reason stays "budget"
            }
        }

        RawGuiSnapshot snapshot = backend.snapshot();
        ctx.visited_screens.insert(snapshot.screen_id);

        GuiStateDoc doc = perceive(snapshot);
        std::optional<GuiStateDoc> cached = cache.lookup(doc.signature);
        if (!cached) {
            cache.insert(doc.signature, doc);
        }
        const GuiStateDoc& prompt_doc = cached ? *cached : doc;

        TestOperation op;
        try {
            op = policy.decide(ctx, doc, prompt_doc, snapshot);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::kNoActionableWidget) {
                end_reason = "exhausted";
                break;
            }
            if (e.code() == ErrorCode::kPolicyFailure) {
                end_reason = "policy_failure";
                break;
            }
            throw;
        }
        if (!repeat_guard(ctx.history, op, doc.signature)) {
            // The policy is contractually required to pre-filter; a
            // violating operation means the policy itself is broken.
            end_reason = "policy_failure";
            break;
        }

        ResolvedOp rop;
        rop.action = op.action;
        rop.text = op.params.text;
        rop.direction = op.params.direction;
        if (op.action != ActionType::kScroll) {
            rop.at = resolve_coordinates(doc, op);
        }

        StepOutcome out = backend.apply(rop);

        std::optional<GuiStateDoc> next_doc;
        if (out.new_snapshot) {
            next_doc = perceive(*out.new_snapshot);
        }

        IntentVerdict verdict;
        if (next_doc) {
            verdict = intent_check(doc, *next_doc, op.intent);
        } else {
            verdict.fulfilled = false;
            verdict.reason = "the app crashed before the effect could be observed";
        }
        BugFindings findings = detect_bugs(out, next_doc ? &*next_doc : nullptr);

        ctx.history.push_back(
            make_record(step, op, doc, snapshot, out, verdict, findings));
        ctx.step_index = static_cast<int>(ctx.history.size());
        triggered.insert(findings.crashes.begin(), findings.crashes.end());
        triggered.insert(findings.functional.begin(), findings.functional.end());

        if (out.crash) {
            end_reason = "crash";
            break;
        }
    }

    Trace trace;
    trace.agent_name = params.agent_name;
    trace.persona = params.persona;
    trace.app_id = app.app_id;
    trace.task = ctx.task;
    trace.run_index = params.run_index;
    trace.seed = params.seed;
    trace.events = std::move(ctx.history);
    trace.triggered_bugs.assign(triggered.begin(), triggered.end());
    trace.end_reason = end_reason;
    if (params.measure_wall_time) {
        trace.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          started)
                .count();
    }
    return trace;
}

}  // namespace pprobe
