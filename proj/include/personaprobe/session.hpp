#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "personaprobe/agent.hpp"
#include "personaprobe/app_model.hpp"
#include "personaprobe/execution.hpp"
#include "personaprobe/trace.hpp"

// The per-run driver: perceive -> decide -> execute -> validate until the
// budget runs out, the app crashes, or the policy gives up.

namespace pprobe {

struct SessionParams {
    std::string agent_name;
    std::optional<Persona> persona;  // absent: baseline behavior
    std::string task;                // empty: use the app model's core task
    Budget budget;
    std::uint64_t seed = 0;
    int run_index = 1;
    double cache_threshold = kCacheThreshold;
    // Record real elapsed time (and enforce the wall budget). Off by
    // default so scripted runs serialize identically across machines.
    bool measure_wall_time = false;
};

// Runs one full session against a freshly reset backend and returns its
// trace. end_reason is one of "budget", "crash", "exhausted" (nothing left
// to do), or "policy_failure".
Trace run_session(const AppModel& app, ExecutionBackend& backend,
                  DecisionPolicy& policy, const SessionParams& params);

}  // namespace pprobe
