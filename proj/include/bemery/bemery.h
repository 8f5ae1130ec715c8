/*
 * bemery C API.
 *
 * Opaque handles own their data and are released with the matching
 * *_destroy call. Every function returns a bem_status; on failure the
 * message of the calling thread's last error is available from
 * bem_last_error(). Graph functions are arrays of doubles indexed by vertex
 * index, with bem_graph_vertex_count() entries.
 *
 * Functions that fill a caller buffer take (out, capacity, count): *count
 * always receives the required size; passing out == NULL only queries it,
 * and a short buffer yields BEM_ERR_BUFFER_TOO_SMALL.
 *
 * Dimensions are passed as doubles, with INFINITY for n = infinity.
 */
#ifndef BEMERY_BEMERY_H
#define BEMERY_BEMERY_H

#include <stddef.h>
#include <stdint.h>

#if defined(BEMERY_BUILDING_LIBRARY)
#define BEMERY_API __attribute__((visibility("default")))
#else
#define BEMERY_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bem_status {
  BEM_OK = 0,
  BEM_ERR_INVALID_ARGUMENT = 1,
  BEM_ERR_UNKNOWN_VERTEX = 2,
  BEM_ERR_DOMAIN_MISMATCH = 3,
  BEM_ERR_VALIDATION = 4,
  BEM_ERR_PARSE = 5,
  BEM_ERR_PRECONDITION = 6,
  BEM_ERR_NULL_POINTER = 7,
  BEM_ERR_BUFFER_TOO_SMALL = 8,
  BEM_ERR_INTERNAL = 9
} bem_status;

typedef struct bem_raw_graph_s bem_raw_graph;
typedef struct bem_graph_s bem_graph;
typedef struct bem_heat_s bem_heat;

BEMERY_API const char* bem_version(void);
BEMERY_API const char* bem_status_name(bem_status status);
BEMERY_API const char* bem_last_error(void);

/* ---- raw (unvalidated) graph data ---- */

BEMERY_API bem_status bem_raw_graph_create(bem_raw_graph** out);
BEMERY_API bem_status bem_raw_graph_parse_json(const char* text, bem_raw_graph** out);
BEMERY_API bem_status bem_raw_graph_parse_edge_list(const char* edges, const char* measures,
                                                    bem_raw_graph** out);
BEMERY_API bem_status bem_raw_graph_add_vertex(bem_raw_graph* raw, const char* id, double measure);
/* b(from, to) = weight; an absent reverse entry means the pair is symmetric. */
BEMERY_API bem_status bem_raw_graph_add_entry(bem_raw_graph* raw, const char* from, const char* to,
                                              double weight);
/* Runs validation; messages stay valid until the next validate or destroy. */
BEMERY_API bem_status bem_raw_graph_validate(bem_raw_graph* raw, size_t* violation_count);
BEMERY_API bem_status bem_raw_graph_violation(const bem_raw_graph* raw, size_t index,
                                              const char** message);
BEMERY_API bem_status bem_raw_graph_build(const bem_raw_graph* raw, bem_graph** out);
BEMERY_API void bem_raw_graph_destroy(bem_raw_graph* raw);

/* ---- graphs ---- */

BEMERY_API bem_status bem_graph_parse_json(const char* text, bem_graph** out);
BEMERY_API bem_status bem_graph_parse_edge_list(const char* edges, const char* measures,
                                                bem_graph** out);
/* family: path, cycle, complete, star, hypercube, weighted_tree;
 * profile: unit or normalizing. */
BEMERY_API bem_status bem_graph_generate(const char* family, size_t size, const char* profile,
                                         uint64_t seed, bem_graph** out);
/* Random spanning tree plus independent extra edges; uniform weights and
 * measures in the given ranges. */
BEMERY_API bem_status bem_graph_random(size_t vertices, double extra_edge_probability,
                                       double weight_min, double weight_max, double measure_min,
                                       double measure_max, uint64_t seed, bem_graph** out);
BEMERY_API void bem_graph_destroy(bem_graph* graph);

/* JSON document, NUL terminated; *needed includes the terminator. */
BEMERY_API bem_status bem_graph_to_json(const bem_graph* graph, char* buffer, size_t capacity,
                                        size_t* needed);
BEMERY_API bem_status bem_graph_vertex_count(const bem_graph* graph, size_t* count);
BEMERY_API bem_status bem_graph_edge_count(const bem_graph* graph, size_t* count);
BEMERY_API bem_status bem_graph_edge(const bem_graph* graph, size_t index, size_t* u, size_t* v,
                                     double* weight);
/* The returned string is owned by the graph. */
BEMERY_API bem_status bem_graph_vertex_id(const bem_graph* graph, size_t index, const char** id);
BEMERY_API bem_status bem_graph_vertex_index(const bem_graph* graph, const char* id, size_t* index);
BEMERY_API bem_status bem_graph_measure(const bem_graph* graph, size_t vertex, double* measure);
BEMERY_API bem_status bem_graph_degree(const bem_graph* graph, size_t vertex, double* degree);
BEMERY_API bem_status bem_graph_ball(const bem_graph* graph, size_t vertex, size_t radius,
                                     size_t* out, size_t capacity, size_t* count);
BEMERY_API bem_status bem_graph_is_connected(const bem_graph* graph, int* connected);
BEMERY_API bem_status bem_graph_ellipticity(const bem_graph* graph, double* constant,
                                            int* has_witness, size_t* witness_u,
                                            size_t* witness_v);

/* ---- Γ-calculus ---- */

BEMERY_API bem_status bem_laplacian(const bem_graph* graph, const double* f, double* out);
/* Γ_k(f, h) for k in {0, 1, 2} through the recursion. */
BEMERY_API bem_status bem_gamma(const bem_graph* graph, int k, const double* f, const double* h,
                                double* out);

/* ---- curvature ---- */

typedef struct bem_curvature_result {
  size_t vertex;
  double dimension;
  double curvature;
  int converged;
  double bracket_width;
} bem_curvature_result;

BEMERY_API bem_status bem_cd_check(const bem_graph* graph, double K, double n, size_t vertex,
                                   int* holds, double* min_eigenvalue);
BEMERY_API bem_status bem_curvature_solve(const bem_graph* graph, size_t vertex, double n,
                                          bem_curvature_result* result);
/* per_vertex must hold vertex_count entries. */
BEMERY_API bem_status bem_curvature_profile(const bem_graph* graph, double n, unsigned jobs,
                                            bem_curvature_result* per_vertex,
                                            double* global_curvature);

/* ---- heat semigroup ---- */

/* With dirichlet != 0 the operator is restricted to the domain vertices. */
BEMERY_API bem_status bem_heat_create(const bem_graph* graph, int dirichlet, const size_t* domain,
                                      size_t domain_size, bem_heat** out);
BEMERY_API void bem_heat_destroy(bem_heat* heat);
BEMERY_API bem_status bem_heat_eigenvalues(const bem_heat* heat, double* out, size_t capacity,
                                           size_t* count);
BEMERY_API bem_status bem_heat_apply(const bem_heat* heat, double t, const double* f, double* out);
BEMERY_API bem_status bem_heat_mass(const bem_heat* heat, double t, size_t vertex, double* mass);
/* s -> P_s Γ_k(P_{t-s} f)(vertex) on a sorted grid in [0, t], k in {0, 1}. */
BEMERY_API bem_status bem_semigroup_gamma_path(const bem_heat* heat, int k, const double* f,
                                               double t, const double* s_grid, size_t grid_size,
                                               size_t vertex, double* out);

/* ---- gradient estimates and related checks ---- */

/* K follows the CD(-K, n) convention of the gradient estimates. */
typedef struct bem_estimate_report {
  size_t function_id;
  double t;
  size_t vertex;
  double K;
  double dimension;
  double slack_ii;
  double slack_iii;
  double slack_iv;
  double slack_v;
  double quadrature_error_ii;
  int pass_ii;
  int pass_iii;
  int pass_iv;
  int pass_v;
} bem_estimate_report;

BEMERY_API bem_status bem_verify_estimates(const bem_heat* heat, double K, double n,
                                           const double* f, double t, size_t vertex,
                                           bem_estimate_report* report);
/* Functions are stored row-major, one row of vertex_count values each. */
BEMERY_API bem_status bem_standard_corpus(const bem_heat* heat, uint64_t seed,
                                          size_t random_count, double smoothing_time,
                                          double* out, size_t capacity_functions,
                                          size_t* function_count);
BEMERY_API bem_status bem_witness_corpus(const bem_graph* graph, double n, double* out,
                                         size_t capacity_functions, size_t* function_count);
/* *first_failure receives SIZE_MAX when every report passes. */
BEMERY_API bem_status bem_estimate_sweep(const bem_heat* heat, double K, double n,
                                         const double* t_grid, size_t t_count,
                                         const double* functions, size_t function_count,
                                         unsigned jobs, bem_estimate_report* reports,
                                         size_t capacity, size_t* report_count, int* all_pass,
                                         size_t* first_failure);

typedef struct bem_converse_scan_result {
  int violated;
  double t;
  size_t function_id;
  size_t vertex;
  double slack_iii;
} bem_converse_scan_result;

BEMERY_API bem_status bem_converse_scan(const bem_heat* heat, double K, double n,
                                        const double* functions, size_t function_count,
                                        const double* t_grid, size_t t_count,
                                        bem_converse_scan_result* result);

/* values: <f, Δh>_m, <Δf, h>_m, -sum Γ(f,h) m, term scale. */
BEMERY_API bem_status bem_green_check(const bem_graph* graph, const double* f, const double* h,
                                      double values[4]);
BEMERY_API bem_status bem_ec_norm_check(const bem_graph* graph, double* ellipticity_constant,
                                        double* operator_norm);

typedef struct bem_cutoff_result {
  double epsilon;
  double time;
  double max_gamma;
  int intermediate_bound_holds;
  double intermediate_bound_excess;
} bem_cutoff_result;

/* eta must hold vertex_count entries. */
BEMERY_API bem_status bem_build_cutoff(const bem_heat* heat, const size_t* target_set,
                                       size_t target_size, double epsilon,
                                       const size_t* source_set, size_t source_size, double* eta,
                                       bem_cutoff_result* result);

typedef struct bem_finiteness_vertex {
  size_t vertex;
  double degree;
  int vacuous;
  double epsilon_threshold;
  double jensen_max_excess;
  double decay_max_excess;
} bem_finiteness_vertex;

/* vertices: vertex_count entries; bounds and contradiction: vertex_count x
 * epsilon_count row-major (either may be NULL). K is a CD(K, inf) bound. */
BEMERY_API bem_status bem_finiteness_probe(const bem_heat* heat, double K,
                                           const double* epsilon_grid, size_t epsilon_count,
                                           uint64_t seed, size_t samples,
                                           bem_finiteness_vertex* vertices, double* bounds,
                                           int* contradiction, int* inequalities_hold);

typedef struct bem_taylor_coefficients {
  double fitted_first;
  double exact_first;
  double fitted_second;
  double exact_second;
} bem_taylor_coefficients;

typedef struct bem_taylor_report {
  size_t vertex;
  double K;
  bem_taylor_coefficients variance;
  bem_taylor_coefficients growth;
  bem_taylor_coefficients decay;
  double max_relative_error;
} bem_taylor_report;

BEMERY_API bem_status bem_taylor_check(const bem_heat* heat, const double* f, size_t vertex,
                                       double K, bem_taylor_report* report);

#ifdef __cplusplus
}
#endif

#endif
