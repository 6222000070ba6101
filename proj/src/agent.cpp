#include "personaprobe/agent.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

#include "httplib.h"
#include "json.hpp"
#include "personaprobe/hashing.hpp"
#include "personaprobe/metrics.hpp"
#include "personaprobe/simulator.hpp"

namespace pprobe {

namespace {

constexpr std::string_view kFallbackAlphabet = "abcdefghijklmnopqrstuvwxyz0123456789";

char pick_char(DetRng& rng, std::string_view alphabet) {
    return alphabet[rng.bounded(alphabet.size())];
}

std::set<std::string> token_set(std::string_view text) {
    std::set<std::string> out;
    for (auto& t : whitespace_tokens(normalize_label(text))) {
        out.insert(std::move(t));
    }
    return out;
}

}  // namespace

PayloadResult generate_input_payload(const InputRule& rule, InputClass requested,
                                     std::uint64_t seed,
                                     std::string_view field_id) {
    DetRng rng(mix_seed(mix_seed(seed, "payload"), field_id));
    const std::string_view alphabet =
        rule.charset.universal() ? kFallbackAlphabet : rule.charset.members();

    PayloadResult out;
    out.requested = requested;

    switch (requested) {
        case InputClass::kValidShort: {
            out.text = std::string(1, pick_char(rng, alphabet));
            if (rule.short_len < 2) {
                // Every non-empty conforming text already counts as long.
                out.note = "valid_short unattainable for this field "
                           "(short_len < 2); produced the nearest valid text";
            }
            break;
        }
        case InputClass::kValidLong: {
            out.text.reserve(rule.max_len);
            for (std::size_t i = 0; i < rule.max_len; ++i) {
                out.text += pick_char(rng, alphabet);
            }
            break;
        }
        case InputClass::kInvalid: {
            if (const auto excluded = rule.charset.excluded_char()) {
                out.text = std::string(1, *excluded);
            } else {
                for (std::size_t i = 0; i < rule.max_len + 1; ++i) {
                    out.text += pick_char(rng, alphabet);
                }
            }
            break;
        }
    }
    out.achieved = classify_input(rule, out.text);
    return out;
}

std::string build_prompt(const SessionContext& ctx, const GuiStateDoc& doc) {
    std::string out;
    out += "# Tester Briefing\n";
    out += "You are a crowd tester exploring the app \"" + ctx.app_id + "\".\n";
    out += "Task: " + ctx.task + "\n\n";

    if (ctx.persona) {
        out += "# Persona\n";
        out += render_persona_prompt(*ctx.persona);
        out += "\n";
    }

    out += "# Recent Actions\n";
    if (ctx.history.empty()) {
        out += "(none yet)\n";
    } else {
        const std::size_t n = ctx.history.size();
        const std::size_t start =
            n > static_cast<std::size_t>(kPromptHistoryWindow)
                ? n - kPromptHistoryWindow
                : 0;
        for (std::size_t i = start; i < n; ++i) {
            const DecisionRecord& r = ctx.history[i];
            out += "- " + r.purified_phrase;
            out += r.outcome.accepted ? " -> accepted" : " -> rejected";
            out += r.outcome.state_changed ? ", state changed"
                                           : ", no state change";
            out += r.outcome.intent_fulfilled ? ", intent fulfilled"
                                              : ", intent unfulfilled";
            out += "\n";
        }
    }

    out += "\n# Current GUI State\n";
    out += doc.bytes;
    out += "\n\n# Output Format\n";
    out += "Reply with exactly one JSON object shaped as "
           "{\"intent\": {\"goal\": <string>, \"expected_effect\": "
           "\"screen_change\"|\"value_change\"|\"reveal_widget\"|"
           "\"none_expected\"}, \"target_ref\": <integer ref from the GUI "
           "state>, \"action\": \"click\"|\"input\"|\"toggle\"|\"scroll\", "
           "\"params\": {\"text\": <string>} for input, {\"direction\": "
           "\"down\"|\"up\"} for scroll, {} otherwise, \"summary\": "
           "<string>}.\n";
    return out;
}

bool repeat_guard(const std::vector<DecisionRecord>& history,
                  const TestOperation& op,
                  const std::vector<double>& current_sig) {
    const std::size_t n = history.size();
    const std::size_t start =
        n > static_cast<std::size_t>(kRepeatGuardWindow)
            ? n - kRepeatGuardWindow
            : 0;
    bool any_match = false;
    for (std::size_t i = start; i < n; ++i) {
        const DecisionRecord& r = history[i];
        const TestOperation& past = r.operation;
        const bool identical = past.target_widget_id == op.target_widget_id &&
                               past.action == op.action &&
                               past.params.text == op.params.text &&
                               past.params.direction == op.params.direction;
        if (!identical) continue;
        any_match = true;
        if (cosine(r.gui_doc_signature, current_sig) <
            kRepeatGuardSimilarity) {
            return true;  // the screen moved on since; allow the retry
        }
    }
    return !any_match;
}

std::vector<TestOperation> hidden_widget_search(const GuiStateDoc& doc,
                                                const TestIntent& intent,
                                                const RawGuiSnapshot& snapshot) {
    const std::set<std::string> goal_tokens = token_set(intent.goal);

    struct Hit {
        int overlap;
        int opener_ref;
        std::string opener_id;
        std::string opener_label;
        std::string hidden_label;
    };
    std::map<std::string, Hit> best_by_opener;

    for (const auto& w : snapshot.widgets) {
        if (!w.hidden || w.revealed_by.empty()) continue;
        const SnapWidget* opener = snapshot.find(w.revealed_by);
        if (!opener || opener->hidden || !opener->interactable) continue;
        const int opener_ref = doc.ref_of(opener->id);
        if (opener_ref < 0) continue;

        int overlap = 0;
        for (const auto& token : token_set(w.label)) {
            if (goal_tokens.count(token)) ++overlap;
        }
        if (overlap < 1) continue;

        const Hit hit{overlap, opener_ref, opener->id, opener->label, w.label};
        auto it = best_by_opener.find(opener->id);
        if (it == best_by_opener.end() || hit.overlap > it->second.overlap) {
            best_by_opener[opener->id] = hit;
        }
    }

    std::vector<Hit> hits;
    for (auto& [id, hit] : best_by_opener) hits.push_back(hit);
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        if (a.overlap != b.overlap) return a.overlap > b.overlap;
        return a.opener_ref < b.opener_ref;
    });

    std::vector<TestOperation> out;
    for (const auto& hit : hits) {
        TestOperation op;
        op.intent = intent;
        op.target_ref = hit.opener_ref;
        op.target_widget_id = hit.opener_id;
        op.action = ActionType::kClick;
        op.summary = "reveal \"" + hit.hidden_label + "\" via \"" +
                     hit.opener_label + "\"";
        out.push_back(std::move(op));
    }
    return out;
}

namespace {

struct Candidate {
    ActionType action = ActionType::kClick;
    int ref = -1;
    std::string widget_id;
    std::string text;
    std::string direction;
    WidgetKind kind = WidgetKind::kButton;
    std::string raw_label;
    Bounds bounds;
    bool navigates = false;
    std::string goto_target;
    bool reveals = false;
    double score = 0.0;
    int order_key = 0;
};

ActionType primary_action(WidgetKind kind) {
    switch (kind) {
        case WidgetKind::kToggle: return ActionType::kToggle;
        case WidgetKind::kInputField: return ActionType::kInput;
        default: return ActionType::kClick;
    }
}

double strategy_base(Strategy strategy, ActionType action, bool core) {
    switch (strategy) {
        case Strategy::kClickOriented:
            return (action == ActionType::kClick ||
                    action == ActionType::kToggle)
                       ? 3.0
                       : 1.0;
        case Strategy::kCoreFunctionFocused:
            return core ? 4.0 : 1.0;
        case Strategy::kInputOriented:
            return action == ActionType::kInput ? 4.0 : 1.0;
    }
    return 1.0;
}

class ScriptedPolicy final : public DecisionPolicy {
  public:
    explicit ScriptedPolicy(std::optional<Persona> persona)
        : persona_(std::move(persona)) {}

    std::string name() const override {
        return persona_ ? "scripted:" + to_code(*persona_)
                        : "scripted:baseline";
    }

    TestOperation decide(const SessionContext& ctx, const GuiStateDoc& doc,
                         const GuiStateDoc& /*prompt_doc*/,
                         const RawGuiSnapshot& snapshot) override {
        std::set<std::pair<std::string, ActionType>> seen;
        for (const auto& r : ctx.history) {
            seen.insert({r.operation.target_widget_id, r.operation.action});
        }

        const InputClass habit_class =
            persona_ ? habit_input_class(persona_->habit)
                     : InputClass::kValidShort;

        std::vector<Candidate> candidates;

        for (std::size_t i = 0; i < doc.records.size(); ++i) {
            const DocRecord& r = doc.records[i];
            if (!r.interactable) continue;
            const SnapWidget* sw = snapshot.find(doc.widget_ids[i]);
            if (!sw) continue;

            Candidate c;
            c.action = primary_action(sw->kind);
            c.ref = static_cast<int>(i);
            c.widget_id = sw->id;
            c.kind = sw->kind;
            c.raw_label = sw->label;
            c.bounds = sw->bounds;
            c.order_key = static_cast<int>(i);
            if (c.action == ActionType::kClick && !sw->goto_target.empty()) {
                c.navigates = true;
                c.goto_target = sw->goto_target;
            }
            if (c.action == ActionType::kInput) {
                if (!sw->input_rule) continue;
                c.text = generate_input_payload(*sw->input_rule, habit_class,
                                                ctx.seed, sw->id)
                             .text;
            }
            for (const auto& other : snapshot.widgets) {
                if (other.hidden && other.revealed_by == sw->id) {
                    c.reveals = true;
                    break;
                }
            }
            if (persona_) {
                c.score = score_direct(*sw, c, ctx, seen);
            }
            candidates.push_back(std::move(c));
        }

        // Hidden widgets pull their opener forward: clicking the opener is
        // scored almost as well as the concealed widget itself would be.
        if (persona_) {
            for (const auto& hidden : snapshot.widgets) {
                if (!hidden.hidden || hidden.revealed_by.empty()) continue;
                const SnapWidget* opener = snapshot.find(hidden.revealed_by);
                if (!opener || opener->hidden || !opener->interactable) {
                    continue;
                }
                const int opener_ref = doc.ref_of(opener->id);
                if (opener_ref < 0 ||
                    !doc.records[static_cast<std::size_t>(opener_ref)]
                         .interactable) {
                    continue;
                }

                const ActionType hidden_action = primary_action(hidden.kind);
                double score = strategy_base(persona_->strategy, hidden_action,
                                             hidden.core);
                if (!seen.count({hidden.id, hidden_action})) score += 2.0;
                if (persona_->mindset == Mindset::kSequentialCoherent) {
                    score += 1.0;
                }
                score -= 1.0;

                bool merged = false;
                for (auto& c : candidates) {
                    if (c.ref == opener_ref &&
                        c.action == ActionType::kClick) {
                        c.reveals = true;
                        c.score = std::max(c.score, score);
                        merged = true;
                        break;
                    }
                }
                if (!merged) continue;  // opener always has a direct candidate
            }
        }

        const int scroll_order = static_cast<int>(doc.records.size()) * 10;
        const auto add_scroll = [&](const char* dir, int extra) {
            Candidate c;
            c.action = ActionType::kScroll;
            c.widget_id =
                "scroll:" + snapshot.screen_id + ":" + std::string(dir);
            c.direction = dir;
            c.order_key = scroll_order + extra;
            if (persona_) {
                c.score = 2.0;
                if (!seen.count({c.widget_id, ActionType::kScroll})) {
                    c.score += 2.0;
                }
                if (persona_->mindset == Mindset::kSequentialCoherent) {
                    c.score += 1.0;
                }
            }
            candidates.push_back(std::move(c));
        };
        if (snapshot.can_scroll_down) add_scroll("down", 0);
        if (snapshot.can_scroll_up) add_scroll("up", 1);

        if (candidates.empty()) {
            raise(ErrorCode::kNoActionableWidget,
                  "no interactable widget and no hidden candidate on screen \"" +
                      snapshot.screen_id + "\"");
        }

        std::vector<Candidate> allowed;
        for (auto& c : candidates) {
            TestOperation probe;
            probe.target_widget_id = c.widget_id;
            probe.action = c.action;
            probe.params.text = c.text;
            probe.params.direction = c.direction;
            if (repeat_guard(ctx.history, probe, doc.signature)) {
                allowed.push_back(std::move(c));
            }
        }
        if (allowed.empty()) {
            raise(ErrorCode::kNoActionableWidget,
                  "every candidate operation is blocked by the repeat guard");
        }

        const Candidate& chosen = pick(allowed, ctx);
        return to_operation(chosen);
    }

  private:
    static InputClass habit_input_class(Habit h) {
        switch (h) {
            case Habit::kValidLong: return InputClass::kValidLong;
            case Habit::kValidShort: return InputClass::kValidShort;
            case Habit::kInvalid: return InputClass::kInvalid;
        }
        return InputClass::kValidShort;
    }

    double score_direct(const SnapWidget& sw, const Candidate& c,
                        const SessionContext& ctx,
                        const std::set<std::pair<std::string, ActionType>>&
                            seen) const {
        double score = strategy_base(persona_->strategy, c.action, sw.core);
        if (!seen.count({c.widget_id, c.action})) score += 2.0;
        if (persona_->mindset == Mindset::kSequentialCoherent) {
            if (!c.navigates) score += 1.0;
        } else {
            if (c.navigates && !ctx.visited_screens.count(c.goto_target)) {
                score += 2.0;
            }
        }
        return score;
    }

    const Candidate& pick(const std::vector<Candidate>& allowed,
                          const SessionContext& ctx) const {
        DetRng rng(mix_seed(mix_seed(ctx.seed, "decide"),
                            static_cast<std::uint64_t>(ctx.step_index)));
        if (!persona_) {
            return allowed[rng.bounded(allowed.size())];
        }
        if (persona_->mindset == Mindset::kSequentialCoherent) {
            const Candidate* best = &allowed.front();
            for (const auto& c : allowed) {
                if (c.score > best->score ||
                    (c.score == best->score && c.order_key < best->order_key)) {
                    best = &c;
                }
            }
            return *best;
        }
        // Divergent mindset: seeded sampling among the top five, sharpened
        // toward the higher scores.
        std::vector<const Candidate*> top;
        for (const auto& c : allowed) top.push_back(&c);
        std::sort(top.begin(), top.end(),
                  [](const Candidate* a, const Candidate* b) {
                      if (a->score != b->score) return a->score > b->score;
                      return a->order_key < b->order_key;
                  });
        if (top.size() > 5) top.resize(5);
        std::vector<double> weights;
        weights.reserve(top.size());
        for (const Candidate* c : top) {
            const double w = std::max(c->score, 0.1);
            weights.push_back(w * w * w);
        }
        return *top[rng.weighted(weights)];
    }

    TestOperation to_operation(const Candidate& c) const {
        TestOperation op;
        op.target_ref = c.ref;
        op.target_widget_id = c.widget_id;
        op.action = c.action;
        op.params.text = c.text;
        op.params.direction = c.direction;

        if (c.action == ActionType::kInput ||
            c.action == ActionType::kToggle) {
            op.intent.expected_effect = ExpectedEffect::kValueChange;
        } else if (c.action == ActionType::kScroll || c.reveals) {
            op.intent.expected_effect = ExpectedEffect::kRevealWidget;
        } else if (c.navigates) {
            op.intent.expected_effect = ExpectedEffect::kScreenChange;
        } else {
            op.intent.expected_effect = ExpectedEffect::kNoneExpected;
        }
        op.intent.goal =
            purify_phrase(c.action, c.kind, c.raw_label, c.bounds, c.direction);

        op.summary = op.intent.goal;
        if (c.action == ActionType::kInput) {
            op.summary += " with \"" + c.text + "\"";
        } else if (c.reveals) {
            op.summary += " to reveal hidden options";
        }
        return op;
    }

    std::optional<Persona> persona_;
};

class RemotePolicy final : public DecisionPolicy {
  public:
    explicit RemotePolicy(RemotePolicyConfig cfg) : cfg_(std::move(cfg)) {}

    std::string name() const override { return "remote:" + cfg_.model; }

    TestOperation decide(const SessionContext& ctx, const GuiStateDoc& doc,
                         const GuiStateDoc& prompt_doc,
                         const RawGuiSnapshot& /*snapshot*/) override {
        const std::string prompt = build_prompt(ctx, prompt_doc);
        std::string complaint;
        for (int attempt = 0; attempt < 3; ++attempt) {
            std::string request = prompt;
            if (!complaint.empty()) {
                request += "\n# Correction\n" + complaint + "\n";
            }
            std::string content;
            if (!call_endpoint(request, content)) {
                complaint = "transport failure; reply with exactly one JSON "
                            "object per the output format";
                continue;
            }
            TestOperation op;
            std::string why;
            if (!parse_decision(content, doc, prompt_doc, op, why)) {
                complaint = "your reply was malformed (" + why +
                            "); reply with exactly one JSON object per the "
                            "output format";
                continue;
            }
            if (!repeat_guard(ctx.history, op, doc.signature)) {
                complaint = "that operation repeats a recent one on an "
                            "unchanged screen; pick a different target or "
                            "action";
                continue;
            }
            return op;
        }
        raise(ErrorCode::kPolicyFailure,
              "remote policy produced no valid decision after a repair "
              "re-prompt and a retry");
    }

  private:
    bool call_endpoint(const std::string& prompt, std::string& content) const {
        httplib::Client client(cfg_.base_url);
        client.set_connection_timeout(cfg_.timeout_seconds);
        client.set_read_timeout(cfg_.timeout_seconds);

        httplib::Headers headers;
        if (const char* key = std::getenv(cfg_.credential_env.c_str())) {
            headers.emplace("Authorization", std::string("Bearer ") + key);
        }

        nlohmann::ordered_json body;
        body["model"] = cfg_.model;
        body["temperature"] = 0;
        body["messages"] = nlohmann::ordered_json::array(
            {{{"role", "user"}, {"content", prompt}}});

        const auto res = client.Post("/v1/chat/completions", headers,
                                     body.dump(), "application/json");
        if (!res || res->status != 200) return false;
        try {
            const auto doc = nlohmann::json::parse(res->body);
            content = doc.at("choices").at(0).at("message").at("content")
                          .get<std::string>();
        } catch (const nlohmann::json::exception&) {
            return false;
        }
        return true;
    }

    static bool parse_decision(const std::string& content,
                               const GuiStateDoc& doc,
                               const GuiStateDoc& prompt_doc, TestOperation& op,
                               std::string& why) {
        nlohmann::json d;
        try {
            d = nlohmann::json::parse(content);
        } catch (const nlohmann::json::exception& e) {
            why = std::string("not JSON: ") + e.what();
            return false;
        }
        try {
            op.intent.goal = d.at("intent").at("goal").get<std::string>();
            op.intent.expected_effect = parse_expected_effect(
                d.at("intent").at("expected_effect").get<std::string>());
            op.action = parse_action(d.at("action").get<std::string>());
            op.summary = d.value("summary", "");
            if (d.contains("params") && d["params"].is_object()) {
                op.params.text = d["params"].value("text", "");
                op.params.direction = d["params"].value("direction", "");
            }
            if (op.intent.goal.empty()) {
                why = "empty intent goal";
                return false;
            }
            if (op.action == ActionType::kInput && op.params.text.empty()) {
                why = "input action without params.text";
                return false;
            }
            if (op.action == ActionType::kScroll) {
                op.target_ref = -1;
                op.target_widget_id = "scroll:" + doc.screen_id + ":" +
                                      (op.params.direction == "up" ? "up"
                                                                   : "down");
                return true;
            }
            const int ref = d.at("target_ref").get<int>();
            if (ref < 0 ||
                ref >= static_cast<int>(prompt_doc.records.size())) {
                why = "target_ref out of range";
                return false;
            }
            const std::string& wid =
                prompt_doc.widget_ids[static_cast<std::size_t>(ref)];
            const int fresh = doc.ref_of(wid);
            if (fresh < 0) {
                why = "target widget no longer present";
                return false;
            }
            op.target_ref = fresh;
            op.target_widget_id = wid;
        } catch (const nlohmann::json::exception& e) {
            why = std::string("missing or mistyped field: ") + e.what();
            return false;
        } catch (const Error& e) {
            why = e.what();
            return false;
        }
        return true;
    }

    RemotePolicyConfig cfg_;
};

}  // namespace

std::unique_ptr<DecisionPolicy> scripted_policy(std::optional<Persona> persona) {
    return std::make_unique<ScriptedPolicy>(std::move(persona));
}

std::unique_ptr<DecisionPolicy> remote_policy(const RemotePolicyConfig& cfg) {
    return std::make_unique<RemotePolicy>(cfg);
}

}  // namespace pprobe
