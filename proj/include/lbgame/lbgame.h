#ifndef LBGAME_H
#define LBGAME_H

/* C interface to the load balancing game library.
 *
 * Every function returns an lbg_status. On failure a message is available
 * from lbg_last_error() until the next call on the same thread. Strings
 * returned through char** outputs are heap allocated and must be released
 * with lbg_string_free. Jobs and servers are 1-based in all JSON. */

#include <stdint.h>

#if defined(_WIN32)
#  if defined(LBGAME_BUILDING)
#    define LBG_API __declspec(dllexport)
#  else
#    define LBG_API __declspec(dllimport)
#  endif
#else
#  define LBG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lbg_status {
    LBG_OK = 0,
    LBG_VERIFY_FAILED = 1, /* a verification check failed; outputs are still filled */
    LBG_INPUT_ERROR = 2,
    LBG_CAP_EXCEEDED = 3,
    LBG_INTERNAL_ERROR = 4
} lbg_status;

typedef struct lbg_instance lbg_instance;
typedef struct lbg_assignment lbg_assignment;

typedef struct lbg_options {
    uint64_t search_cap; /* max target vectors m^n for coalition search */
    uint64_t tilde_cap;  /* max tilde arc sets per graph */
    unsigned workers;    /* threads for search and sweeps */
} lbg_options;

LBG_API const char* lbg_version(void);
LBG_API const char* lbg_last_error(void);
LBG_API void lbg_string_free(char* s);
LBG_API void lbg_options_default(lbg_options* options);

/* Instances: {"m": 3, "jobs": [2, 3]} */
LBG_API lbg_status lbg_instance_from_json(const char* json, lbg_instance** out);
LBG_API lbg_status lbg_instance_random(int m, int n, int64_t lo, int64_t hi, uint64_t seed, lbg_instance** out);
LBG_API lbg_status lbg_instance_to_json(const lbg_instance* instance, char** json);
LBG_API int lbg_instance_servers(const lbg_instance* instance);
LBG_API int lbg_instance_jobs(const lbg_instance* instance);
LBG_API void lbg_instance_free(lbg_instance* instance);

/* Assignments: {"server_of": [1, 1, 2]} */
LBG_API lbg_status lbg_assignment_from_json(const lbg_instance* instance, const char* json, lbg_assignment** out);
LBG_API lbg_status lbg_assignment_to_json(const lbg_assignment* assignment, char** json);
LBG_API void lbg_assignment_free(lbg_assignment* assignment);

LBG_API lbg_status lbg_figure1(lbg_instance** instance, lbg_assignment** assignment);

/* Best-response dynamics from a seeded uniform random start. */
LBG_API lbg_status lbg_best_response(const lbg_instance* instance, uint64_t seed, lbg_assignment** out);
LBG_API lbg_status lbg_lpt(const lbg_instance* instance, lbg_assignment** out);

/* *is_nash is 1 for an equilibrium; json holds the witness. */
LBG_API lbg_status lbg_check_nash(const lbg_instance* instance, const lbg_assignment* assignment, int* is_nash,
                                  char** json);

/* ratio receives "p/q"; json holds ratio, "sne" flag and witness. */
LBG_API lbg_status lbg_worst_deviation(const lbg_instance* instance, const lbg_assignment* assignment,
                                       const lbg_options* options, char** ratio, char** json);

LBG_API lbg_status lbg_minimal_deviations(const lbg_instance* instance, const lbg_assignment* assignment,
                                          const lbg_options* options, char** json);

/* deviation: {"moves": {"1": 3, "5": 1}} */
LBG_API lbg_status lbg_evaluate_deviation(const lbg_instance* instance, const lbg_assignment* assignment,
                                          const char* deviation, char** json);

/* Deviation graph plus structure checks. Minimality is determined by search.
 * dot may be NULL. */
LBG_API lbg_status lbg_analyze_graph(const lbg_instance* instance, const lbg_assignment* assignment,
                                     const char* deviation, const lbg_options* options, char** json, char** dot);

/* Tilde selection and inequality checks on a minimal deviation. The DOT
 * output draws the selected tilde arcs in bold. dot may be NULL. */
LBG_API lbg_status lbg_verify(const lbg_instance* instance, const lbg_assignment* assignment, const char* deviation,
                              const lbg_options* options, char** json, char** dot);

/* Full pipeline over one equilibrium: worst ratio, minimal deviations and
 * every check on each of them. */
LBG_API lbg_status lbg_analyze_equilibrium(const lbg_instance* instance, const lbg_assignment* assignment,
                                           const lbg_options* options, char** json);

/* workers = 0 keeps the config value. csv and summary may be NULL. */
LBG_API lbg_status lbg_sweep(const char* config, unsigned workers, char** csv, char** summary);

LBG_API lbg_status lbg_figure1_pipeline(const lbg_options* options, char** json);

#ifdef __cplusplus
}
#endif

#endif
