#ifndef ROBUSTNET_H
#define ROBUSTNET_H

/* C API for the robustnet library: discrete-scenario robust network
 * optimization (minmax / minmax-regret), 3-SAT reduction generators, gap
 * amplification and gap verification.
 *
 * All objects are opaque handles created and destroyed by this API.
 * Functions return RN_OK on success; on failure an error code comes back
 * and rn_last_error() carries a message for the calling thread. Strings
 * returned through char** out-parameters are owned by the caller and
 * must be released with rn_string_free().
 */

#include <stddef.h>
#include <stdint.h>

#if defined(__cplusplus)
extern "C" {
#endif

typedef enum rn_status {
  RN_OK = 0,
  RN_ERROR = 1,       /* invalid input or domain error */
  RN_PARSE_ERROR = 2, /* malformed text input */
  RN_REFUSED = 3      /* size or budget cap hit; never silent truncation */
} rn_status;

typedef enum rn_family {
  RN_FAMILY_PATH = 0,
  RN_FAMILY_TREE = 1,
  RN_FAMILY_CUT = 2,
  RN_FAMILY_ASSIGNMENT = 3
} rn_family;

typedef enum rn_objective {
  RN_OBJECTIVE_MINMAX = 0,
  RN_OBJECTIVE_REGRET = 1,
  RN_OBJECTIVE_MEAN = 2 /* mean-scenario heuristic, value re-evaluated as minmax */
} rn_objective;

typedef enum rn_method {
  RN_METHOD_AUTO = 0,
  RN_METHOD_BRUTE = 1,
  RN_METHOD_DP = 2
} rn_method;

typedef enum rn_amplify_mode {
  RN_MODE_FAITHFUL = 0,
  RN_MODE_COMPRESSED = 1
} rn_amplify_mode;

typedef struct rn_cnf rn_cnf;
typedef struct rn_instance rn_instance;
typedef struct rn_result rn_result;
typedef struct rn_gap_report rn_gap_report;
typedef struct rn_implicit rn_implicit;

const char* rn_version(void);

/* Message for the most recent failure on this thread; empty when none. */
const char* rn_last_error(void);

void rn_string_free(char* text);

/* ---- 3-SAT formulas ------------------------------------------------ */

rn_status rn_cnf_parse_dimacs(const char* text, rn_cnf** out);
void rn_cnf_free(rn_cnf* cnf);
int rn_cnf_variable_count(const rn_cnf* cnf);
int rn_cnf_clause_count(const rn_cnf* cnf);

/* ---- instances ------------------------------------------------------ */

rn_status rn_instance_parse(const char* text, rn_instance** out);
rn_status rn_instance_serialize(const rn_instance* inst, char** out_text);
void rn_instance_free(rn_instance* inst);

/* Report of violated invariants (empty when valid); *valid_out set to 1/0. */
rn_status rn_instance_validate(const rn_instance* inst, char** report_out, int* valid_out);

rn_family rn_instance_family(const rn_instance* inst);
int rn_instance_node_count(const rn_instance* inst);
int rn_instance_edge_count(const rn_instance* inst);
int rn_instance_scenario_count(const rn_instance* inst);

/* ---- reductions and amplification ----------------------------------- */

rn_status rn_sat_to_path(const rn_cnf* cnf, rn_instance** out);
rn_status rn_sat_to_cut(const rn_cnf* cnf, rn_instance** out);

/* Materialized amplification of a generated base instance (each scenario
 * must have exactly two unit-cost entries). meta_out, when non-NULL,
 * receives '#'-comment lines describing levels, mode, expected gap and
 * counts, suitable for prepending to the serialized instance. */
rn_status rn_amplify(const rn_instance* base, int levels, rn_amplify_mode mode,
                     rn_instance** out, char** meta_out);

/* Implicit amplified instance: counts plus pure cost lookups. */
rn_status rn_implicit_create(const rn_instance* base, int levels, rn_implicit** out);
void rn_implicit_free(rn_implicit* implicit);
rn_status rn_implicit_counts(const rn_implicit* implicit, uint64_t* edges_out,
                             uint64_t* scenarios_out, uint64_t* expected_gap_out);
rn_status rn_implicit_cost(const rn_implicit* implicit, uint64_t edge, uint64_t scenario,
                           int64_t* cost_out);

/* Path -> spanning tree transform of a level-0 path instance (and back).
 * The solution arrays are edge ids; outputs follow the same convention. */
rn_status rn_path_to_tree(const rn_instance* path_instance, const int* path_edges,
                          int path_edge_count, rn_instance** tree_out, rn_result** tree_solution);
rn_status rn_tree_to_path(const rn_instance* tree_instance, const int* tree_edges,
                          int tree_edge_count, rn_instance** path_out, rn_result** path_solution);

/* ---- solving --------------------------------------------------------- */

rn_status rn_solve(const rn_instance* inst, rn_objective objective, rn_method method,
                   rn_result** out);
void rn_result_free(rn_result* result);
int64_t rn_result_value(const rn_result* result);
const char* rn_result_method(const rn_result* result); /* brute | pareto_dp | heuristic */
int rn_result_edge_count(const rn_result* result);
int rn_result_edge(const rn_result* result, int index);
rn_status rn_result_solution_text(const rn_result* result, char** out_text);

rn_status rn_solution_parse(const char* text, int64_t* value_out, int** edges_out,
                            int* edge_count_out);
void rn_ints_free(int* values);

/* ---- verification ---------------------------------------------------- */

rn_status rn_check_gap(const rn_cnf* cnf, const char* formula_id, rn_family family, int levels,
                       rn_amplify_mode mode, uint64_t samples, uint64_t seed,
                       rn_gap_report** out);
void rn_gap_report_free(rn_gap_report* report);
int rn_gap_report_pass(const rn_gap_report* report);
rn_status rn_gap_report_text(const rn_gap_report* report, int include_timings, char** out_text);
rn_status rn_gap_report_csv(const rn_gap_report* report, int include_header, char** out_text);

/* Text verdict of the F* = 0 / regret = minmax identity; *holds_out 1/0. */
rn_status rn_regret_identity(const rn_instance* inst, char** report_out, int* holds_out);

/* Heuristic-vs-exact ratio harness; CSV written to *csv_out.
 * *bound_violated_out is 1 when some trial broke the K-approximation
 * bound. jobs > 1 runs trials concurrently with unchanged output. */
rn_status rn_bench(const char* config_text, uint64_t seed, int jobs, char** csv_out,
                   int* bound_violated_out);

#if defined(__cplusplus)
}
#endif

#endif /* ROBUSTNET_H */
