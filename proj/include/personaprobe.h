/* C interface to the personaprobe engine.
 *
 * Every function returns a ppr_status; PPR_OK means success. On failure the
 * thread-local message from ppr_last_error() describes what went wrong.
 * Strings returned through char** out-parameters are heap-allocated and must
 * be released with ppr_string_free().
 */
#ifndef PERSONAPROBE_H
#define PERSONAPROBE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ppr_status {
    PPR_OK = 0,
    PPR_ERR_INVALID_ARGUMENT = 1,
    PPR_ERR_MALFORMED_PERSONA_CODE = 2,
    PPR_ERR_UNKNOWN_AGENT_NAME = 3,
    PPR_ERR_SCHEMA_VIOLATION = 4,
    PPR_ERR_DANGLING_REFERENCE = 5,
    PPR_ERR_UNKNOWN_WIDGET = 6,
    PPR_ERR_HIDDEN_WIDGET = 7,
    PPR_ERR_SESSION_CRASHED = 8,
    PPR_ERR_NO_ACTIONABLE_WIDGET = 9,
    PPR_ERR_POLICY_FAILURE = 10,
    PPR_ERR_TARGET_OUT_OF_RANGE = 11,
    PPR_ERR_BACKEND_FAILURE = 12,
    PPR_ERR_EMPTY_PATH = 13,
    PPR_ERR_ZERO_VECTOR = 14,
    PPR_ERR_INSUFFICIENT_PATHS = 15,
    PPR_ERR_CONFIG = 16,
    PPR_ERR_IO = 17,
    PPR_ERR_RUNTIME = 18
} ppr_status;

/* Library version string, e.g. "0.1.0". Static storage; do not free. */
const char* ppr_version(void);

/* Message for the most recent failure on the calling thread. Static
 * thread-local storage; valid until the next failing call. Never NULL. */
const char* ppr_last_error(void);

/* Releases a string returned through a char** out-parameter. NULL is ok. */
void ppr_string_free(char* s);

/* ---- persona catalog ---- */

/* The standard nine-persona catalog plus the baseline agent, as a JSON
 * array of {name, code, mindset, strategy, habit, baseline}. */
ppr_status ppr_catalog_json(char** out_json);

/* Prompt block for one agent name (e.g. "P_B"); the baseline agent "P_X"
 * yields an empty string (its prompt carries no persona block). */
ppr_status ppr_persona_prompt(const char* agent_name, char** out_text);

/* ---- app models ---- */

typedef struct ppr_model ppr_model;

ppr_status ppr_model_load(const char* path, ppr_model** out_model);
void ppr_model_free(ppr_model* model);

/* Structural problems found in a model file, as a JSON array of strings
 * (empty array = valid). Unreadable files or malformed JSON still fail. */
ppr_status ppr_model_validate_file(const char* path, char** out_problems_json);

/* {app_id, core_task, entry_screen, screens, widgets, bugs} counts/names. */
ppr_status ppr_model_summary_json(const ppr_model* model, char** out_json);

/* ---- sessions ---- */

/* Runs one scripted session of agent_name (catalog name or "P_X") on the
 * model and returns the trace as one JSON line. */
ppr_status ppr_session_run_json(const ppr_model* model, const char* agent_name,
                                int budget_steps, uint64_t seed,
                                char** out_trace_json);

/* ---- campaigns ---- */

/* Runs the campaign described by a config file (or by config JSON text) and
 * writes the output bundle. out_dir_override, when non-NULL, replaces the
 * config's out_dir. out_failed_sessions (may be NULL) receives the number of
 * sessions that did not complete normally; the bundle is written either way.
 */
ppr_status ppr_campaign_run(const char* config_path,
                            const char* out_dir_override,
                            int* out_failed_sessions);
ppr_status ppr_campaign_run_json_text(const char* config_json,
                                      const char* out_dir_override,
                                      int* out_failed_sessions);

/* Recomputes report.json, csv tables, and summary.txt from an existing
 * bundle's config.json + traces.jsonl. Derived files are written to
 * out_dir_override when non-NULL and non-empty, otherwise back into dir. */
ppr_status ppr_analyze_dir(const char* dir, const char* out_dir_override,
                           int* out_failed_sessions);

/* Renders an existing bundle's report to text. format: "json", "csv"
 * (tables concatenated, each preceded by "# <file name>"), or "text". */
ppr_status ppr_report_render(const char* dir, const char* format,
                             char** out_text);

#ifdef __cplusplus
}
#endif

#endif /* PERSONAPROBE_H */
