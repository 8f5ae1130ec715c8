#include "bemery/bemery.h"

#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "bemery/curvature.hpp"
#include "bemery/error.hpp"
#include "bemery/gamma.hpp"
#include "bemery/generators.hpp"
#include "bemery/graph.hpp"
#include "bemery/graph_io.hpp"
#include "bemery/heat.hpp"
#include "bemery/theorems.hpp"

struct bem_raw_graph_s {
  bemery::RawGraph raw;
  std::vector<std::string> violations;
};

struct bem_graph_s {
  bemery::WeightedGraph graph;
};

struct bem_heat_s {
  bemery::HeatOperator heat;
};

namespace {

using namespace bemery;

thread_local std::string last_error;

struct StatusError {
  bem_status status;
  std::string message;
};

[[noreturn]] void raise(bem_status status, std::string message) {
  throw StatusError{status, std::move(message)};
}

bem_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return BEM_ERR_INVALID_ARGUMENT;
    case ErrorCode::unknown_vertex: return BEM_ERR_UNKNOWN_VERTEX;
    case ErrorCode::domain_mismatch: return BEM_ERR_DOMAIN_MISMATCH;
    case ErrorCode::validation: return BEM_ERR_VALIDATION;
    case ErrorCode::parse: return BEM_ERR_PARSE;
    case ErrorCode::precondition: return BEM_ERR_PRECONDITION;
  }
  return BEM_ERR_INTERNAL;
}

template <typename Body>
bem_status guarded(Body&& body) {
  try {
    body();
    return BEM_OK;
  } catch (const StatusError& e) {
    last_error = e.message;
    return e.status;
  } catch (const Error& e) {
    last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    last_error = std::string("internal error: ") + e.what();
    return BEM_ERR_INTERNAL;
  } catch (...) {
    last_error = "internal error";
    return BEM_ERR_INTERNAL;
  }
}

template <typename T>
T& deref(T* p, const char* name) {
  if (!p) raise(BEM_ERR_NULL_POINTER, std::string(name) + " is NULL");
  return *p;
}

void require(const void* p, const char* name) {
  if (!p) raise(BEM_ERR_NULL_POINTER, std::string(name) + " is NULL");
}

const WeightedGraph& graph_of(const bem_graph* g) { return deref(g, "graph").graph; }
const HeatOperator& heat_of(const bem_heat* h) { return deref(h, "heat").heat; }

GraphFunction function_from(const WeightedGraph& g, const double* values, const char* name) {
  require(values, name);
  GraphFunction f(static_cast<Eigen::Index>(g.size()));
  std::memcpy(f.data(), values, g.size() * sizeof(double));
  return f;
}

void function_to(const GraphFunction& f, double* out) {
  require(out, "out");
  std::memcpy(out, f.data(), static_cast<std::size_t>(f.size()) * sizeof(double));
}

std::vector<GraphFunction> functions_from(const WeightedGraph& g, const double* rows,
                                          std::size_t count) {
  if (count > 0) require(rows, "functions");
  std::vector<GraphFunction> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(function_from(g, rows + i * g.size(), "functions"));
  return out;
}

// Returns true when the caller actually wants the data copied.
bool sized_output(const void* out, std::size_t capacity, std::size_t needed, std::size_t* count) {
  require(count, "count");
  *count = needed;
  if (!out) return false;
  if (capacity < needed) {
    raise(BEM_ERR_BUFFER_TOO_SMALL, "buffer holds " + std::to_string(capacity) + " but " +
                                        std::to_string(needed) + " are needed");
  }
  return true;
}

std::vector<VertexIndex> vertex_list(const size_t* items, std::size_t count, const char* name) {
  if (count > 0) require(items, name);
  return std::vector<VertexIndex>(items, items + count);
}

bem_estimate_report to_c(const EstimateReport& r) {
  bem_estimate_report c{};
  c.function_id = r.function_id;
  c.t = r.t;
  c.vertex = r.x;
  c.K = r.K;
  c.dimension = r.n.value();
  c.slack_ii = r.slack_ii;
  c.slack_iii = r.slack_iii;
  c.slack_iv = r.slack_iv;
  c.slack_v = r.slack_v;
  c.quadrature_error_ii = r.quadrature_error_ii;
  c.pass_ii = r.pass_ii;
  c.pass_iii = r.pass_iii;
  c.pass_iv = r.pass_iv;
  c.pass_v = r.pass_v;
  return c;
}

bem_curvature_result to_c(const CurvatureResult& r) {
  return {r.vertex, r.dimension.value(), r.curvature, r.converged ? 1 : 0, r.bracket_width};
}

bem_taylor_coefficients to_c(const TaylorCoefficients& c) {
  return {c.fitted_first, c.exact_first, c.fitted_second, c.exact_second};
}

}  // namespace

extern "C" {

BEMERY_API const char* bem_version(void) { return "0.1.0"; }

BEMERY_API const char* bem_status_name(bem_status status) {
  switch (status) {
    case BEM_OK: return "ok";
    case BEM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BEM_ERR_UNKNOWN_VERTEX: return "unknown vertex";
    case BEM_ERR_DOMAIN_MISMATCH: return "domain mismatch";
    case BEM_ERR_VALIDATION: return "validation failed";
    case BEM_ERR_PARSE: return "parse error";
    case BEM_ERR_PRECONDITION: return "precondition failed";
    case BEM_ERR_NULL_POINTER: return "null pointer";
    case BEM_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case BEM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

BEMERY_API const char* bem_last_error(void) { return last_error.c_str(); }

/* raw graphs */

BEMERY_API bem_status bem_raw_graph_create(bem_raw_graph** out) {
  return guarded([&] { deref(out, "out") = new bem_raw_graph_s{}; });
}

BEMERY_API bem_status bem_raw_graph_parse_json(const char* text, bem_raw_graph** out) {
  return guarded([&] {
    require(text, "text");
    auto raw = parse_json_document(text);
    deref(out, "out") = new bem_raw_graph_s{std::move(raw), {}};
  });
}

BEMERY_API bem_status bem_raw_graph_parse_edge_list(const char* edges, const char* measures,
                                                    bem_raw_graph** out) {
  return guarded([&] {
    require(edges, "edges");
    require(measures, "measures");
    auto raw = parse_edge_list(edges, measures);
    deref(out, "out") = new bem_raw_graph_s{std::move(raw), {}};
  });
}

BEMERY_API bem_status bem_raw_graph_add_vertex(bem_raw_graph* raw, const char* id, double measure) {
  return guarded([&] {
    require(id, "id");
    deref(raw, "raw").raw.vertices.push_back({id, measure});
  });
}

BEMERY_API bem_status bem_raw_graph_add_entry(bem_raw_graph* raw, const char* from, const char* to,
                                              double weight) {
  return guarded([&] {
    require(from, "from");
    require(to, "to");
    deref(raw, "raw").raw.entries.push_back({from, to, weight});
  });
}

BEMERY_API bem_status bem_raw_graph_validate(bem_raw_graph* raw, size_t* violation_count) {
  return guarded([&] {
    auto& r = deref(raw, "raw");
    r.violations = validate(r.raw);
    deref(violation_count, "violation_count") = r.violations.size();
  });
}

BEMERY_API bem_status bem_raw_graph_violation(const bem_raw_graph* raw, size_t index,
                                              const char** message) {
  return guarded([&] {
    const auto& r = deref(raw, "raw");
    if (index >= r.violations.size()) raise(BEM_ERR_INVALID_ARGUMENT, "violation index out of range");
    deref(message, "message") = r.violations[index].c_str();
  });
}

BEMERY_API bem_status bem_raw_graph_build(const bem_raw_graph* raw, bem_graph** out) {
  return guarded([&] {
    auto g = WeightedGraph::from_raw(deref(raw, "raw").raw);
    deref(out, "out") = new bem_graph_s{std::move(g)};
  });
}

BEMERY_API void bem_raw_graph_destroy(bem_raw_graph* raw) { delete raw; }

/* graphs */

BEMERY_API bem_status bem_graph_parse_json(const char* text, bem_graph** out) {
  return guarded([&] {
    require(text, "text");
    auto g = parse_graph_json(text);
    deref(out, "out") = new bem_graph_s{std::move(g)};
  });
}

BEMERY_API bem_status bem_graph_parse_edge_list(const char* edges, const char* measures,
                                                bem_graph** out) {
  return guarded([&] {
    require(edges, "edges");
    require(measures, "measures");
    auto g = parse_graph_edge_list(edges, measures);
    deref(out, "out") = new bem_graph_s{std::move(g)};
  });
}

BEMERY_API bem_status bem_graph_generate(const char* family, size_t size, const char* profile,
                                         uint64_t seed, bem_graph** out) {
  return guarded([&] {
    require(family, "family");
    auto fam = parse_family(family);
    if (!fam) raise(BEM_ERR_INVALID_ARGUMENT, std::string("unknown graph family '") + family + "'");
    GeneratorParams params;
    params.size = size;
    params.seed = seed;
    if (profile) {
      auto prof = parse_profile(profile);
      if (!prof) raise(BEM_ERR_INVALID_ARGUMENT, std::string("unknown measure profile '") + profile + "'");
      params.profile = *prof;
    }
    auto g = generate(*fam, params);
    deref(out, "out") = new bem_graph_s{std::move(g)};
  });
}

BEMERY_API bem_status bem_graph_random(size_t vertices, double extra_edge_probability,
                                       double weight_min, double weight_max, double measure_min,
                                       double measure_max, uint64_t seed, bem_graph** out) {
  return guarded([&] {
    if (!(extra_edge_probability >= 0.0 && extra_edge_probability <= 1.0)) {
      raise(BEM_ERR_INVALID_ARGUMENT, "edge probability must lie in [0, 1]");
    }
    RandomGraphParams params{vertices, extra_edge_probability, weight_min, weight_max,
                             measure_min, measure_max, seed};
    auto g = random_connected_graph(params);
    deref(out, "out") = new bem_graph_s{std::move(g)};
  });
}

BEMERY_API void bem_graph_destroy(bem_graph* graph) { delete graph; }

BEMERY_API bem_status bem_graph_to_json(const bem_graph* graph, char* buffer, size_t capacity,
                                        size_t* needed) {
  return guarded([&] {
    const std::string text = to_json_document(graph_of(graph));
    if (sized_output(buffer, capacity, text.size() + 1, needed)) {
      std::memcpy(buffer, text.c_str(), text.size() + 1);
    }
  });
}

BEMERY_API bem_status bem_graph_vertex_count(const bem_graph* graph, size_t* count) {
  return guarded([&] { deref(count, "count") = graph_of(graph).size(); });
}

BEMERY_API bem_status bem_graph_edge_count(const bem_graph* graph, size_t* count) {
  return guarded([&] { deref(count, "count") = graph_of(graph).edges().size(); });
}

BEMERY_API bem_status bem_graph_edge(const bem_graph* graph, size_t index, size_t* u, size_t* v,
                                     double* weight) {
  return guarded([&] {
    const auto& edges = graph_of(graph).edges();
    if (index >= edges.size()) raise(BEM_ERR_INVALID_ARGUMENT, "edge index out of range");
    deref(u, "u") = edges[index].u;
    deref(v, "v") = edges[index].v;
    deref(weight, "weight") = edges[index].weight;
  });
}

BEMERY_API bem_status bem_graph_vertex_id(const bem_graph* graph, size_t index, const char** id) {
  return guarded([&] { deref(id, "id") = graph_of(graph).id(index).c_str(); });
}

BEMERY_API bem_status bem_graph_vertex_index(const bem_graph* graph, const char* id, size_t* index) {
  return guarded([&] {
    require(id, "id");
    deref(index, "index") = graph_of(graph).index_of(id);
  });
}

BEMERY_API bem_status bem_graph_measure(const bem_graph* graph, size_t vertex, double* measure) {
  return guarded([&] { deref(measure, "measure") = graph_of(graph).measure(vertex); });
}

BEMERY_API bem_status bem_graph_degree(const bem_graph* graph, size_t vertex, double* deg) {
  return guarded([&] { deref(deg, "degree") = degree(graph_of(graph), vertex); });
}

BEMERY_API bem_status bem_graph_ball(const bem_graph* graph, size_t vertex, size_t radius,
                                     size_t* out, size_t capacity, size_t* count) {
  return guarded([&] {
    const auto members = ball(graph_of(graph), vertex, radius);
    if (sized_output(out, capacity, members.size(), count)) {
      std::copy(members.begin(), members.end(), out);
    }
  });
}

BEMERY_API bem_status bem_graph_is_connected(const bem_graph* graph, int* connected) {
  return guarded([&] { deref(connected, "connected") = is_connected(graph_of(graph)) ? 1 : 0; });
}

BEMERY_API bem_status bem_graph_ellipticity(const bem_graph* graph, double* constant,
                                            int* has_witness, size_t* witness_u,
                                            size_t* witness_v) {
  return guarded([&] {
    const auto cert = ellipticity_constant(graph_of(graph));
    deref(constant, "constant") = cert.constant;
    if (has_witness) *has_witness = cert.witness_edge ? 1 : 0;
    if (cert.witness_edge) {
      if (witness_u) *witness_u = cert.witness_edge->first;
      if (witness_v) *witness_v = cert.witness_edge->second;
    }
  });
}

/* Γ-calculus */

BEMERY_API bem_status bem_laplacian(const bem_graph* graph, const double* f, double* out) {
  return guarded([&] {
    const auto& g = graph_of(graph);
    function_to(laplacian(g, function_from(g, f, "f")), out);
  });
}

BEMERY_API bem_status bem_gamma(const bem_graph* graph, int k, const double* f, const double* h,
                                double* out) {
  return guarded([&] {
    const auto& g = graph_of(graph);
    function_to(gamma_k(g, k, function_from(g, f, "f"), function_from(g, h, "h")), out);
  });
}

/* curvature */

BEMERY_API bem_status bem_cd_check(const bem_graph* graph, double K, double n, size_t vertex,
                                   int* holds, double* min_eigenvalue) {
  return guarded([&] {
    const auto result = cd_check(graph_of(graph), K, Dimension(n), vertex);
    deref(holds, "holds") = result.holds ? 1 : 0;
    if (min_eigenvalue) *min_eigenvalue = result.min_eigenvalue;
  });
}

BEMERY_API bem_status bem_curvature_solve(const bem_graph* graph, size_t vertex, double n,
                                          bem_curvature_result* result) {
  return guarded([&] {
    deref(result, "result") = to_c(curvature_solve(graph_of(graph), vertex, Dimension(n)));
  });
}

BEMERY_API bem_status bem_curvature_profile(const bem_graph* graph, double n, unsigned jobs,
                                            bem_curvature_result* per_vertex,
                                            double* global_curvature) {
  return guarded([&] {
    const auto profile = curvature_profile(graph_of(graph), Dimension(n), jobs);
    if (per_vertex) {
      for (std::size_t i = 0; i < profile.per_vertex.size(); ++i) per_vertex[i] = to_c(profile.per_vertex[i]);
    }
    deref(global_curvature, "global_curvature") = profile.global_curvature;
  });
}

/* heat */

BEMERY_API bem_status bem_heat_create(const bem_graph* graph, int dirichlet, const size_t* domain,
                                      size_t domain_size, bem_heat** out) {
  return guarded([&] {
    const auto& g = graph_of(graph);
    require(out, "out");
    std::optional<std::vector<VertexIndex>> omega;
    if (dirichlet) omega = vertex_list(domain, domain_size, "domain");
    *out = new bem_heat_s{HeatOperator(g, std::move(omega))};
  });
}

BEMERY_API void bem_heat_destroy(bem_heat* heat) { delete heat; }

BEMERY_API bem_status bem_heat_eigenvalues(const bem_heat* heat, double* out, size_t capacity,
                                           size_t* count) {
  return guarded([&] {
    const auto& values = heat_of(heat).eigenvalues();
    if (sized_output(out, capacity, static_cast<std::size_t>(values.size()), count)) {
      std::memcpy(out, values.data(), static_cast<std::size_t>(values.size()) * sizeof(double));
    }
  });
}

BEMERY_API bem_status bem_heat_apply(const bem_heat* heat, double t, const double* f, double* out) {
  return guarded([&] {
    const auto& h = heat_of(heat);
    function_to(h.apply(t, function_from(h.graph(), f, "f")), out);
  });
}

BEMERY_API bem_status bem_heat_mass(const bem_heat* heat, double t, size_t vertex, double* mass) {
  return guarded([&] { deref(mass, "mass") = heat_of(heat).heat_mass(t, vertex); });
}

BEMERY_API bem_status bem_semigroup_gamma_path(const bem_heat* heat, int k, const double* f,
                                               double t, const double* s_grid, size_t grid_size,
                                               size_t vertex, double* out) {
  return guarded([&] {
    const auto& h = heat_of(heat);
    if (grid_size > 0) require(s_grid, "s_grid");
    require(out, "out");
    const auto values = semigroup_gamma_path(h, k, function_from(h.graph(), f, "f"), t,
                                             std::span<const double>(s_grid, grid_size), vertex);
    std::copy(values.begin(), values.end(), out);
  });
}

/* theorems */

BEMERY_API bem_status bem_verify_estimates(const bem_heat* heat, double K, double n,
                                           const double* f, double t, size_t vertex,
                                           bem_estimate_report* report) {
  return guarded([&] {
    const auto& h = heat_of(heat);
    require(report, "report");
    *report = to_c(verify_estimates(h, K, Dimension(n), function_from(h.graph(), f, "f"), t, vertex));
  });
}

BEMERY_API bem_status bem_standard_corpus(const bem_heat* heat, uint64_t seed,
                                          size_t random_count, double smoothing_time,
                                          double* out, size_t capacity_functions,
                                          size_t* function_count) {
  return guarded([&] {
    const auto& h = heat_of(heat);
    const auto corpus = standard_corpus(h, seed, random_count, smoothing_time);
    if (sized_output(out, capacity_functions, corpus.size(), function_count)) {
      for (std::size_t i = 0; i < corpus.size(); ++i) function_to(corpus[i], out + i * h.graph().size());
    }
  });
}

BEMERY_API bem_status bem_witness_corpus(const bem_graph* graph, double n, double* out,
                                         size_t capacity_functions, size_t* function_count) {
  return guarded([&] {
    const auto& g = graph_of(graph);
    const auto corpus = witness_corpus(g, Dimension(n));
    if (sized_output(out, capacity_functions, corpus.size(), function_count)) {
      for (std::size_t i = 0; i < corpus.size(); ++i) function_to(corpus[i], out + i * g.size());
    }
  });
}

BEMERY_API bem_status bem_estimate_sweep(const bem_heat* heat, double K, double n,
                                         const double* t_grid, size_t t_count,
                                         const double* functions, size_t function_count,
                                         unsigned jobs, bem_estimate_report* reports,
                                         size_t capacity, size_t* report_count, int* all_pass,
                                         size_t* first_failure) {
  return guarded([&] {
    const auto& h = heat_of(heat);
    if (t_count > 0) require(t_grid, "t_grid");
    const auto corpus = functions_from(h.graph(), functions, function_count);
    const auto sweep = estimate_sweep(h, K, Dimension(n), std::span<const double>(t_grid, t_count),
                                      corpus, jobs);
    if (sized_output(reports, capacity, sweep.reports.size(), report_count)) {
      for (std::size_t i = 0; i < sweep.reports.size(); ++i) reports[i] = to_c(sweep.reports[i]);
    }
    if (all_pass) *all_pass = sweep.all_pass ? 1 : 0;
    if (first_failure) *first_failure = sweep.first_counterexample.value_or(SIZE_MAX);
  });
}

BEMERY_API bem_status bem_converse_scan(const bem_heat* heat, double K, double n,
                                        const double* functions, size_t function_count,
                                        const double* t_grid, size_t t_count,
                                        bem_converse_scan_result* result) {
  return guarded([&] {
    const auto& h = heat_of(heat);
    if (t_count > 0) require(t_grid, "t_grid");
    const auto corpus = functions_from(h.graph(), functions, function_count);
    const auto scan = converse_scan(h, K, Dimension(n), corpus, std::span<const double>(t_grid, t_count));
    deref(result, "result") = {scan.violated ? 1 : 0, scan.t, scan.function_id, scan.x, scan.slack_iii};
  });
}

BEMERY_API bem_status bem_green_check(const bem_graph* graph, const double* f, const double* h,
                                      double values[4]) {
  return guarded([&] {
    const auto& g = graph_of(graph);
    require(values, "values");
    const auto triple = green_check(g, function_from(g, f, "f"), function_from(g, h, "h"));
    values[0] = triple.f_laplace_h;
    values[1] = triple.laplace_f_h;
    values[2] = triple.gamma_sum;
    values[3] = triple.term_scale;
  });
}

BEMERY_API bem_status bem_ec_norm_check(const bem_graph* graph, double* ellipticity_constant_out,
                                        double* operator_norm) {
  return guarded([&] {
    const auto pair = ec_norm_check(graph_of(graph));
    deref(ellipticity_constant_out, "ellipticity_constant") = pair.ellipticity_constant;
    deref(operator_norm, "operator_norm") = pair.operator_norm;
  });
}

BEMERY_API bem_status bem_build_cutoff(const bem_heat* heat, const size_t* target_set,
                                       size_t target_size, double epsilon,
                                       const size_t* source_set, size_t source_size, double* eta,
                                       bem_cutoff_result* result) {
  return guarded([&] {
    const auto& h = heat_of(heat);
    require(result, "result");
    const auto cutoff = build_cutoff(h, vertex_list(target_set, target_size, "target_set"), epsilon,
                                     vertex_list(source_set, source_size, "source_set"));
    if (eta) function_to(cutoff.eta, eta);
    *result = {cutoff.epsilon, cutoff.time, cutoff.max_gamma, cutoff.intermediate_bound_holds ? 1 : 0,
               cutoff.intermediate_bound_excess};
  });
}

BEMERY_API bem_status bem_finiteness_probe(const bem_heat* heat, double K,
                                           const double* epsilon_grid, size_t epsilon_count,
                                           uint64_t seed, size_t samples,
                                           bem_finiteness_vertex* vertices, double* bounds,
                                           int* contradiction, int* inequalities_hold) {
  return guarded([&] {
    const auto& h = heat_of(heat);
    if (epsilon_count > 0) require(epsilon_grid, "epsilon_grid");
    const auto report = finiteness_probe(h, K, std::span<const double>(epsilon_grid, epsilon_count),
                                         seed, samples);
    for (std::size_t i = 0; i < report.vertices.size(); ++i) {
      const auto& v = report.vertices[i];
      if (vertices) {
        vertices[i] = {v.x, v.degree, v.vacuous ? 1 : 0, v.epsilon_threshold, v.jensen_max_excess,
                       v.decay_max_excess};
      }
      for (std::size_t j = 0; j < epsilon_count; ++j) {
        if (bounds) bounds[i * epsilon_count + j] = v.bounds[j];
        if (contradiction) contradiction[i * epsilon_count + j] = v.contradiction[j] ? 1 : 0;
      }
    }
    if (inequalities_hold) *inequalities_hold = report.inequalities_hold ? 1 : 0;
  });
}

BEMERY_API bem_status bem_taylor_check(const bem_heat* heat, const double* f, size_t vertex,
                                       double K, bem_taylor_report* report) {
  return guarded([&] {
    const auto& h = heat_of(heat);
    require(report, "report");
    const auto r = taylor_check(h, function_from(h.graph(), f, "f"), vertex, K);
    *report = {r.x, r.K, to_c(r.variance), to_c(r.growth), to_c(r.decay), r.max_relative_error()};
  });
}

}  // extern "C"
