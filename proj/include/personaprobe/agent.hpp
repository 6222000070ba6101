#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "personaprobe/decision_types.hpp"
#include "personaprobe/perception.hpp"
#include "personaprobe/snapshot.hpp"

// The decision layer: persona-conditioned prompt assembly and pluggable
// policies that turn a GUI state document into one TestOperation via an
// intent. Ships a deterministic scripted policy (plus its non-personified
// baseline behavior) and a remote chat-endpoint policy.

namespace pprobe {

// Last-N window the repeat guard inspects.
inline constexpr int kRepeatGuardWindow = 3;
// Doc-signature similarity above which two screens count as "the same" for
// repeat detection.
inline constexpr double kRepeatGuardSimilarity = 0.99;
// History digest length inside the prompt.
inline constexpr int kPromptHistoryWindow = 10;

// Deterministic text generation for input actions.
struct PayloadResult {
    std::string text;
    InputClass requested = InputClass::kValidShort;
    InputClass achieved = InputClass::kValidShort;
    // Non-empty when the requested class is impossible for this rule and the
    // nearest achievable class was produced instead.
    std::string note;
};

PayloadResult generate_input_payload(const InputRule& rule, InputClass requested,
                                     std::uint64_t seed,
                                     std::string_view field_id);

// Ordered prompt sections: briefing+task, persona block (omitted for the
// baseline), digest of the last 10 purified actions, the GUI state document,
// and the output-schema instruction. Same inputs, same bytes.
std::string build_prompt(const SessionContext& ctx, const GuiStateDoc& doc);

// False (reject) iff the identical (target widget, action, params) appears
// among the last kRepeatGuardWindow records AND every one of those matching
// records saw a screen whose signature is >= kRepeatGuardSimilarity cosine
// to the current one.
bool repeat_guard(const std::vector<DecisionRecord>& history,
                  const TestOperation& op,
                  const std::vector<double>& current_sig);

// Reveal-actions (clicks on openers) whose hidden widgets' labels share at
// least one token with the intent goal; ordered by token overlap descending,
// then opener reading order.
std::vector<TestOperation> hidden_widget_search(const GuiStateDoc& doc,
                                                const TestIntent& intent,
                                                const RawGuiSnapshot& snapshot);

class DecisionPolicy {
  public:
    virtual ~DecisionPolicy() = default;

    // doc is the fresh canonical document for this step (target_ref of the
    // returned operation indexes it); prompt_doc is the document used for
    // prompt assembly and may be a cached near-duplicate; snapshot is the
    // structured state backing doc.
    virtual TestOperation decide(const SessionContext& ctx,
                                 const GuiStateDoc& doc,
                                 const GuiStateDoc& prompt_doc,
                                 const RawGuiSnapshot& snapshot) = 0;

    virtual std::string name() const = 0;
};

// Deterministic rule policy. With a persona: strategy-weighted scoring with
// novelty bonuses, argmax for the sequential mindset, seeded top-5 sampling
// for the divergent one, habit-conditioned payloads. Without a persona
// (baseline): seeded-uniform choice among visible candidates with short valid
// payloads. Throws Error(kNoActionableWidget) when nothing is actionable or
// every candidate is repeat-guarded.
std::unique_ptr<DecisionPolicy> scripted_policy(std::optional<Persona> persona);

struct RemotePolicyConfig {
    std::string base_url;       // e.g. "http://localhost:8080"
    std::string model;
    std::string credential_env = "PERSONAPROBE_API_KEY";
    int timeout_seconds = 60;
};

// Chat-completion-backed policy: sends the assembled prompt, expects one
// structured decision object back; on malformed output sends one repair
// re-prompt, then one retry, then throws Error(kPolicyFailure).
std::unique_ptr<DecisionPolicy> remote_policy(const RemotePolicyConfig& cfg);

}  // namespace pprobe
