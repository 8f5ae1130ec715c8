#include "cli_app.hpp"

#include <bemery/bemery.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace bemery::cli {
namespace {

using Json = nlohmann::ordered_json;

struct InputError {
  std::string message;
};

struct ApiError {
  bem_status status;
  std::string message;
};

void check(bem_status status) {
  if (status != BEM_OK) throw ApiError{status, bem_last_error()};
}

struct GraphDeleter {
  void operator()(bem_graph* g) const { bem_graph_destroy(g); }
};
struct RawDeleter {
  void operator()(bem_raw_graph* r) const { bem_raw_graph_destroy(r); }
};
struct HeatDeleter {
  void operator()(bem_heat* h) const { bem_heat_destroy(h); }
};
using GraphPtr = std::unique_ptr<bem_graph, GraphDeleter>;
using RawPtr = std::unique_ptr<bem_raw_graph, RawDeleter>;
using HeatPtr = std::unique_ptr<bem_heat, HeatDeleter>;

struct Options {
  std::string graph;
  std::string edges;
  std::string measures;
  std::string dimension = "inf";
  std::optional<double> K;
  std::optional<double> paper_K;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  std::string t_list;
  std::string vertex;
  std::string f;
  std::string h;
  std::string indicator;
  std::string dirichlet;
  std::string target;
  std::string source;
  std::string epsilon_list;
  double epsilon = 1.0;
  std::size_t random_count = 20;
  double smoothing = 0.1;
  std::size_t samples = 1000;
  std::string family;
  std::size_t size = 0;
  std::string profile = "unit";
  double edge_probability = 0.2;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{"cannot open '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    items.push_back(trim(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  items.erase(std::remove(items.begin(), items.end(), std::string{}), items.end());
  return items;
}

double parse_number(const std::string& text, const std::string& what) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw InputError{what + ": '" + text + "' is not a number"};
  return value;
}

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
  std::vector<double> values;
  for (const auto& item : split_list(text)) values.push_back(parse_number(item, what));
  if (values.empty()) throw InputError{what + ": empty list"};
  return values;
}

double parse_dimension(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Infinity") {
    return std::numeric_limits<double>::infinity();
  }
  const double n = parse_number(text, "--dimension");
  if (!(n > 0.0)) throw InputError{"--dimension must be positive or 'inf'"};
  return n;
}

Json dimension_json(double n) {
  if (std::isinf(n)) return "inf";
  return n;
}

GraphPtr load_graph(const Options& o) {
  bem_graph* g = nullptr;
  if (!o.graph.empty()) {
    if (!o.edges.empty() || !o.measures.empty()) throw InputError{"--graph excludes --edges/--measures"};
    check(bem_graph_parse_json(read_file(o.graph).c_str(), &g));
  } else if (!o.edges.empty() && !o.measures.empty()) {
    check(bem_graph_parse_edge_list(read_file(o.edges).c_str(), read_file(o.measures).c_str(), &g));
  } else {
    throw InputError{"a graph is required: --graph FILE or --edges FILE --measures FILE"};
  }
  return GraphPtr(g);
}

RawPtr load_raw(const Options& o) {
  bem_raw_graph* r = nullptr;
  if (!o.graph.empty()) {
    if (!o.edges.empty() || !o.measures.empty()) throw InputError{"--graph excludes --edges/--measures"};
    check(bem_raw_graph_parse_json(read_file(o.graph).c_str(), &r));
  } else if (!o.edges.empty() && !o.measures.empty()) {
    check(bem_raw_graph_parse_edge_list(read_file(o.edges).c_str(), read_file(o.measures).c_str(), &r));
  } else {
    throw InputError{"a graph is required: --graph FILE or --edges FILE --measures FILE"};
  }
  return RawPtr(r);
}

HeatPtr make_heat(const bem_graph* g, const std::vector<size_t>* domain = nullptr) {
  bem_heat* h = nullptr;
  if (domain) {
    check(bem_heat_create(g, 1, domain->data(), domain->size(), &h));
  } else {
    check(bem_heat_create(g, 0, nullptr, 0, &h));
  }
  return HeatPtr(h);
}

std::size_t vertex_count(const bem_graph* g) {
  std::size_t n = 0;
  check(bem_graph_vertex_count(g, &n));
  return n;
}

std::string vertex_id(const bem_graph* g, std::size_t i) {
  const char* id = nullptr;
  check(bem_graph_vertex_id(g, i, &id));
  return id;
}

std::size_t vertex_index(const bem_graph* g, const std::string& id) {
  std::size_t i = 0;
  check(bem_graph_vertex_index(g, id.c_str(), &i));
  return i;
}

std::vector<size_t> vertex_set(const bem_graph* g, const std::string& text) {
  std::vector<size_t> out;
  for (const auto& id : split_list(text)) out.push_back(vertex_index(g, id));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<size_t> all_vertices(const bem_graph* g) {
  std::vector<size_t> out(vertex_count(g));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

// Either "id=value,..." (missing vertices are 0) or one value per vertex in
// index order.
std::vector<double> parse_function(const bem_graph* g, const std::string& text, const std::string& what) {
  const std::size_t n = vertex_count(g);
  const auto items = split_list(text);
  std::vector<double> f(n, 0.0);
  const bool keyed = std::any_of(items.begin(), items.end(),
                                 [](const std::string& s) { return s.find('=') != std::string::npos; });
  if (keyed) {
    for (const auto& item : items) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw InputError{what + ": mixed keyed and positional values"};
      f[vertex_index(g, trim(item.substr(0, eq)))] = parse_number(trim(item.substr(eq + 1)), what);
    }
  } else {
    if (items.size() != n) {
      throw InputError{what + ": expected " + std::to_string(n) + " values, got " + std::to_string(items.size())};
    }
    for (std::size_t i = 0; i < n; ++i) f[i] = parse_number(items[i], what);
  }
  return f;
}

Json function_json(const bem_graph* g, const double* values) {
  Json obj = Json::object();
  const std::size_t n = vertex_count(g);
  for (std::size_t i = 0; i < n; ++i) obj[vertex_id(g, i)] = values[i];
  return obj;
}

Json report_header(const std::string& command) {
  Json j;
  j["schema"] = "bemery." + command;
  j["version"] = kReportVersion;
  return j;
}

// CD(K, n) curvature bound carried by --K or --paper-K.
std::optional<double> curvature_bound(const Options& o) {
  if (o.K) return *o.K;
  if (o.paper_K) return -*o.paper_K;
  return std::nullopt;
}

double global_curvature(const bem_graph* g, double n, unsigned jobs) {
  double global = 0.0;
  check(bem_curvature_profile(g, n, jobs, nullptr, &global));
  return global;
}

void add_graph_options(CLI::App* sub, Options& o) {
  sub->add_option("--graph", o.graph, "JSON graph document");
  sub->add_option("--edges", o.edges, "edge list file (u v weight per line)");
  sub->add_option("--measures", o.measures, "measure file (v m per line)");
}

void add_sign_options(CLI::App* sub, Options& o) {
  auto* k = sub->add_option("--K", o.K, "curvature bound K in CD(K, n)");
  auto* pk = sub->add_option("--paper-K", o.paper_K, "K in the CD(-K, n) convention of the gradient estimates");
  k->excludes(pk);
  pk->excludes(k);
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  auto raw = load_raw(o);
  std::size_t count = 0;
  check(bem_raw_graph_validate(raw.get(), &count));
  Json j = report_header("validate");
  Json violations = Json::array();
  for (std::size_t i = 0; i < count; ++i) {
    const char* msg = nullptr;
    check(bem_raw_graph_violation(raw.get(), i, &msg));
    violations.push_back(msg);
  }
  j["valid"] = count == 0;
  j["violations"] = violations;
  if (count == 0) {
    bem_graph* built = nullptr;
    check(bem_raw_graph_build(raw.get(), &built));
    GraphPtr g(built);
    std::size_t edges = 0;
    int connected = 0;
    double constant = 0.0;
    int has_witness = 0;
    size_t wu = 0, wv = 0;
    check(bem_graph_edge_count(g.get(), &edges));
    const std::size_t n = vertex_count(g.get());
    j["vertex_count"] = n;
    j["edge_count"] = edges;
    if (n > 0) {
      check(bem_graph_is_connected(g.get(), &connected));
      j["connected"] = connected != 0;
    }
    check(bem_graph_ellipticity(g.get(), &constant, &has_witness, &wu, &wv));
    j["ellipticity_constant"] = constant;
    if (has_witness) j["ellipticity_witness"] = {vertex_id(g.get(), wu), vertex_id(g.get(), wv)};
    err << "valid graph: " << n << " vertices, " << edges << " edges\n";
  } else {
    for (const auto& v : violations) err << "violation: " << v.get<std::string>() << "\n";
  }
  out << j.dump(2) << "\n";
  return count == 0 ? kExitPass : kExitVerdict;
}

Json curvature_json(const bem_graph* g, const bem_curvature_result& r) {
  Json v;
  v["vertex"] = vertex_id(g, r.vertex);
  v["curvature"] = r.curvature;
  v["converged"] = r.converged != 0;
  v["bracket_width"] = r.bracket_width;
  return v;
}

int cmd_curvature(const Options& o, std::ostream& out, std::ostream& err) {
  auto g = load_graph(o);
  const double n = parse_dimension(o.dimension);
  Json j = report_header("curvature");
  j["convention"] = "CD(K,n)";
  j["dimension"] = dimension_json(n);
  bool converged = true;
  if (!o.vertex.empty()) {
    bem_curvature_result r{};
    check(bem_curvature_solve(g.get(), vertex_index(g.get(), o.vertex), n, &r));
    j["vertices"] = Json::array({curvature_json(g.get(), r)});
    converged = r.converged != 0;
    err << "K(" << o.vertex << ", " << o.dimension << ") = " << r.curvature << "\n";
  } else {
    std::vector<bem_curvature_result> rows(vertex_count(g.get()));
    double global = 0.0;
    check(bem_curvature_profile(g.get(), n, o.jobs, rows.data(), &global));
    Json list = Json::array();
    for (const auto& r : rows) {
      list.push_back(curvature_json(g.get(), r));
      converged = converged && r.converged != 0;
    }
    j["global_curvature"] = global;
    j["vertices"] = list;
    err << "global curvature at n = " << o.dimension << ": " << global << "\n";
  }
  j["converged"] = converged;
  out << j.dump(2) << "\n";
  return converged ? kExitPass : kExitVerdict;
}

int cmd_cd_check(const Options& o, std::ostream& out, std::ostream& err) {
  auto g = load_graph(o);
  const auto K = curvature_bound(o);
  if (!K) throw InputError{"cd-check needs --K or --paper-K"};
  const double n = parse_dimension(o.dimension);
  const auto targets = o.vertex.empty() ? all_vertices(g.get()) : vertex_set(g.get(), o.vertex);
  Json j = report_header("cd-check");
  j["K"] = *K;
  j["dimension"] = dimension_json(n);
  Json list = Json::array();
  bool all = true;
  for (const auto x : targets) {
    int holds = 0;
    double min_eig = 0.0;
    check(bem_cd_check(g.get(), *K, n, x, &holds, &min_eig));
    Json v;
    v["vertex"] = vertex_id(g.get(), x);
    v["holds"] = holds != 0;
    v["min_eigenvalue"] = min_eig;
    list.push_back(v);
    if (!holds) {
      all = false;
      err << "CD(" << *K << ", " << o.dimension << ") fails at " << vertex_id(g.get(), x)
          << ": min eigenvalue " << min_eig << "\n";
    }
  }
  j["holds"] = all;
  j["vertices"] = list;
  if (all) err << "CD(" << *K << ", " << o.dimension << ") holds at " << targets.size() << " vertices\n";
  out << j.dump(2) << "\n";
  return all ? kExitPass : kExitVerdict;
}

int cmd_heat(const Options& o, std::ostream& out, std::ostream& err) {
  auto g = load_graph(o);
  std::optional<std::vector<size_t>> domain;
  if (!o.dirichlet.empty()) domain = vertex_set(g.get(), o.dirichlet);
  auto heat = make_heat(g.get(), domain ? &*domain : nullptr);
  const auto ts = parse_number_list(o.t_list.empty() ? "1" : o.t_list, "--t");

  std::size_t count = 0;
  check(bem_heat_eigenvalues(heat.get(), nullptr, 0, &count));
  std::vector<double> eig(count);
  check(bem_heat_eigenvalues(heat.get(), eig.data(), eig.size(), &count));

  std::optional<std::vector<double>> f;
  if (!o.f.empty() && !o.indicator.empty()) throw InputError{"--f excludes --indicator"};
  if (!o.f.empty()) f = parse_function(g.get(), o.f, "--f");
  if (!o.indicator.empty()) {
    f = std::vector<double>(vertex_count(g.get()), 0.0);
    (*f)[vertex_index(g.get(), o.indicator)] = 1.0;
  }
  std::optional<std::size_t> x;
  if (!o.vertex.empty()) x = vertex_index(g.get(), o.vertex);

  Json j = report_header("heat");
  j["dirichlet"] = domain.has_value();
  if (domain) {
    Json ids = Json::array();
    for (auto v : *domain) ids.push_back(vertex_id(g.get(), v));
    j["domain"] = ids;
  }
  j["eigenvalues"] = eig;
  Json steps = Json::array();
  for (const double t : ts) {
    Json step;
    step["t"] = t;
    if (f) {
      std::vector<double> pf(f->size());
      check(bem_heat_apply(heat.get(), t, f->data(), pf.data()));
      step["values"] = function_json(g.get(), pf.data());
    }
    if (x) {
      double mass = 0.0;
      check(bem_heat_mass(heat.get(), t, *x, &mass));
      step["mass"] = mass;
      err << "P_" << t << "1(" << o.vertex << ") = " << mass << "\n";
    }
    steps.push_back(step);
  }
  j["steps"] = steps;
  err << "heat operator: " << eig.size() << " eigenvalues\n";
  out << j.dump(2) << "\n";
  return kExitPass;
}

Json estimate_json(const bem_graph* g, const bem_estimate_report& r) {
  Json v;
  v["function"] = r.function_id;
  v["t"] = r.t;
  v["vertex"] = vertex_id(g, r.vertex);
  v["slack_ii"] = r.slack_ii;
  v["slack_iii"] = r.slack_iii;
  v["slack_iv"] = r.slack_iv;
  v["slack_v"] = r.slack_v;
  v["quadrature_error_ii"] = r.quadrature_error_ii;
  v["pass"] = {{"ii", r.pass_ii != 0}, {"iii", r.pass_iii != 0}, {"iv", r.pass_iv != 0}, {"v", r.pass_v != 0}};
  return v;
}

int cmd_verify_estimates(const Options& o, std::ostream& out, std::ostream& err) {
  auto g = load_graph(o);
  const double n = parse_dimension(o.dimension);
  const std::size_t nv = vertex_count(g.get());
  double paper_K = 0.0;
  std::string source;
  if (o.paper_K) {
    paper_K = *o.paper_K;
    source = "paper-K";
  } else if (o.K) {
    paper_K = -*o.K;
    source = "K";
  } else {
    paper_K = -global_curvature(g.get(), n, o.jobs);
    source = "global curvature";
  }
  auto heat = make_heat(g.get());
  const auto ts = parse_number_list(o.t_list.empty() ? "0.01,0.1,1,5,25" : o.t_list, "--t");

  std::vector<double> corpus;
  std::size_t nf = 0;
  if (!o.f.empty()) {
    corpus = parse_function(g.get(), o.f, "--f");
    nf = 1;
  } else {
    check(bem_standard_corpus(heat.get(), o.seed, o.random_count, o.smoothing, nullptr, 0, &nf));
    corpus.resize(nf * nv);
    check(bem_standard_corpus(heat.get(), o.seed, o.random_count, o.smoothing, corpus.data(), nf, &nf));
  }

  std::size_t count = 0;
  int all_pass = 0;
  std::size_t first = SIZE_MAX;
  check(bem_estimate_sweep(heat.get(), paper_K, n, ts.data(), ts.size(), corpus.data(), nf, o.jobs,
                           nullptr, 0, &count, &all_pass, &first));
  std::vector<bem_estimate_report> reports(count);
  check(bem_estimate_sweep(heat.get(), paper_K, n, ts.data(), ts.size(), corpus.data(), nf, o.jobs,
                           reports.data(), reports.size(), &count, &all_pass, &first));

  Json j = report_header("verify-estimates");
  j["paper_K"] = paper_K;
  j["curvature_K"] = -paper_K;
  j["K_source"] = source;
  j["dimension"] = dimension_json(n);
  j["t"] = ts;
  j["function_count"] = nf;
  j["seed"] = o.seed;
  j["all_pass"] = all_pass != 0;
  if (first != SIZE_MAX) j["first_counterexample"] = estimate_json(g.get(), reports[first]);
  Json list = Json::array();
  for (const auto& r : reports) list.push_back(estimate_json(g.get(), r));
  j["reports"] = list;
  if (all_pass) {
    err << "all estimates hold: " << count << " reports under CD(" << -paper_K << ", " << o.dimension << ")\n";
  } else {
    const auto& r = reports[first];
    err << "estimate violated: function " << r.function_id << ", t = " << r.t << ", vertex "
        << vertex_id(g.get(), r.vertex) << "\n";
  }
  out << j.dump(2) << "\n";
  return all_pass ? kExitPass : kExitVerdict;
}

std::vector<double> random_function(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> f(n);
  for (auto& v : f) v = dist(rng);
  return f;
}

int cmd_green_check(const Options& o, std::ostream& out, std::ostream& err) {
  auto g = load_graph(o);
  std::mt19937_64 rng(o.seed);
  const std::size_t nv = vertex_count(g.get());
  const auto f = o.f.empty() ? random_function(nv, rng) : parse_function(g.get(), o.f, "--f");
  const auto h = o.h.empty() ? random_function(nv, rng) : parse_function(g.get(), o.h, "--h");
  double values[4];
  check(bem_green_check(g.get(), f.data(), h.data(), values));
  const double gap = std::max({std::abs(values[0] - values[1]), std::abs(values[0] - values[2]),
                               std::abs(values[1] - values[2])});
  const double rel = values[3] > 0.0 ? gap / values[3] : (gap == 0.0 ? 0.0 : INFINITY);
  const bool ok = rel <= 1e-10;
  Json j = report_header("green-check");
  j["f_laplace_h"] = values[0];
  j["laplace_f_h"] = values[1];
  j["gamma_sum"] = values[2];
  j["relative_gap"] = rel;
  j["agree"] = ok;
  err << "Green identity " << (ok ? "holds" : "fails") << ", relative gap " << rel << "\n";
  out << j.dump(2) << "\n";
  return ok ? kExitPass : kExitVerdict;
}

int cmd_ec_check(const Options& o, std::ostream& out, std::ostream& err) {
  auto g = load_graph(o);
  double constant = 0.0, norm = 0.0;
  check(bem_ec_norm_check(g.get(), &constant, &norm));
  const bool ok = std::abs(constant - norm) <= 1e-12 * std::max(1.0, std::abs(constant));
  Json j = report_header("ec-check");
  j["ellipticity_constant"] = constant;
  j["operator_norm"] = norm;
  j["equal"] = ok;
  err << "C* = " << constant << ", operator norm = " << norm << "\n";
  out << j.dump(2) << "\n";
  return ok ? kExitPass : kExitVerdict;
}

int cmd_cutoff(const Options& o, std::ostream& out, std::ostream& err) {
  auto g = load_graph(o);
  if (o.target.empty()) throw InputError{"cutoff needs --target"};
  const auto S = vertex_set(g.get(), o.target);
  const auto U = o.source.empty() ? all_vertices(g.get()) : vertex_set(g.get(), o.source);
  auto heat = make_heat(g.get());
  std::vector<double> eta(vertex_count(g.get()));
  bem_cutoff_result r{};
  check(bem_build_cutoff(heat.get(), S.data(), S.size(), o.epsilon, U.data(), U.size(), eta.data(), &r));
  const bool ok = r.max_gamma <= r.epsilon + 1e-10 && r.intermediate_bound_holds;
  Json j = report_header("cutoff");
  j["epsilon"] = r.epsilon;
  j["time"] = r.time;
  j["max_gamma"] = r.max_gamma;
  j["intermediate_bound_holds"] = r.intermediate_bound_holds != 0;
  j["intermediate_bound_excess"] = r.intermediate_bound_excess;
  j["eta"] = function_json(g.get(), eta.data());
  j["bound_holds"] = ok;
  err << "cutoff at t = " << r.time << ": max Gamma(eta) = " << r.max_gamma << " (epsilon " << r.epsilon << ")\n";
  out << j.dump(2) << "\n";
  return ok ? kExitPass : kExitVerdict;
}

int cmd_finiteness(const Options& o, std::ostream& out, std::ostream& err) {
  auto g = load_graph(o);
  const auto K = curvature_bound(o);
  if (!K) throw InputError{"finiteness needs --K or --paper-K"};
  const auto eps = parse_number_list(o.epsilon_list.empty() ? "0.01,0.1,1" : o.epsilon_list, "--epsilon");
  auto heat = make_heat(g.get());
  const std::size_t nv = vertex_count(g.get());
  std::vector<bem_finiteness_vertex> vertices(nv);
  std::vector<double> bounds(nv * eps.size());
  std::vector<int> contradiction(nv * eps.size());
  int holds = 0;
  check(bem_finiteness_probe(heat.get(), *K, eps.data(), eps.size(), o.seed, o.samples, vertices.data(),
                             bounds.data(), contradiction.data(), &holds));
  Json j = report_header("finiteness");
  j["K"] = *K;
  j["epsilon"] = eps;
  j["samples"] = o.samples;
  j["inequalities_hold"] = holds != 0;
  Json list = Json::array();
  for (std::size_t i = 0; i < nv; ++i) {
    const auto& v = vertices[i];
    Json row;
    row["vertex"] = vertex_id(g.get(), v.vertex);
    row["degree"] = v.degree;
    row["vacuous"] = v.vacuous != 0;
    if (!v.vacuous) row["epsilon_threshold"] = v.epsilon_threshold;
    row["bounds"] = std::vector<double>(bounds.begin() + i * eps.size(), bounds.begin() + (i + 1) * eps.size());
    Json c = Json::array();
    for (std::size_t k = 0; k < eps.size(); ++k) c.push_back(contradiction[i * eps.size() + k] != 0);
    row["contradiction"] = c;
    row["jensen_max_excess"] = v.jensen_max_excess;
    row["decay_max_excess"] = v.decay_max_excess;
    list.push_back(row);
  }
  j["vertices"] = list;
  err << "finiteness probe at K = " << *K << ": inequalities " << (holds ? "hold" : "fail") << "\n";
  out << j.dump(2) << "\n";
  return holds ? kExitPass : kExitVerdict;
}

Json taylor_json(const bem_taylor_coefficients& c) {
  return {{"fitted_first", c.fitted_first},
          {"exact_first", c.exact_first},
          {"fitted_second", c.fitted_second},
          {"exact_second", c.exact_second}};
}

int cmd_taylor_check(const Options& o, std::ostream& out, std::ostream& err) {
  auto g = load_graph(o);
  if (o.vertex.empty()) throw InputError{"taylor-check needs --vertex"};
  if (o.f.empty()) throw InputError{"taylor-check needs --f"};
  const auto f = parse_function(g.get(), o.f, "--f");
  const double paper_K = o.paper_K ? *o.paper_K : (o.K ? -*o.K : 0.0);
  auto heat = make_heat(g.get());
  bem_taylor_report r{};
  check(bem_taylor_check(heat.get(), f.data(), vertex_index(g.get(), o.vertex), paper_K, &r));
  const bool ok = r.max_relative_error <= 1e-6;
  Json j = report_header("taylor-check");
  j["vertex"] = o.vertex;
  j["paper_K"] = paper_K;
  j["variance"] = taylor_json(r.variance);
  j["growth"] = taylor_json(r.growth);
  j["decay"] = taylor_json(r.decay);
  j["max_relative_error"] = r.max_relative_error;
  j["agree"] = ok;
  err << "Taylor coefficients at " << o.vertex << ": max relative error " << r.max_relative_error << "\n";
  out << j.dump(2) << "\n";
  return ok ? kExitPass : kExitVerdict;
}

int cmd_generate(const Options& o, std::ostream& out, std::ostream& err) {
  bem_graph* raw = nullptr;
  if (o.family == "random") {
    check(bem_graph_random(o.size, o.edge_probability, 0.1, 2.0, 0.1, 2.0, o.seed, &raw));
  } else {
    check(bem_graph_generate(o.family.c_str(), o.size, o.profile.c_str(), o.seed, &raw));
  }
  GraphPtr g(raw);
  std::size_t needed = 0;
  check(bem_graph_to_json(g.get(), nullptr, 0, &needed));
  std::string text(needed, '\0');
  check(bem_graph_to_json(g.get(), text.data(), text.size(), &needed));
  text.resize(needed - 1);
  out << text << "\n";
  err << "generated " << o.family << " graph with " << vertex_count(g.get()) << " vertices\n";
  return kExitPass;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Bakry-Emery curvature and heat semigroup toolkit for weighted graphs", "bemery"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "check a graph file and report violations");
  add_graph_options(validate, o);

  auto* curvature = app.add_subcommand("curvature", "per-vertex and global curvature at dimension n");
  add_graph_options(curvature, o);
  curvature->add_option("--dimension", o.dimension, "dimension n, a positive number or inf");
  curvature->add_option("--vertex", o.vertex, "single vertex id");
  curvature->add_option("--jobs", o.jobs, "worker threads");

  auto* cd = app.add_subcommand("cd-check", "test CD(K, n) at one or all vertices");
  add_graph_options(cd, o);
  add_sign_options(cd, o);
  cd->add_option("--dimension", o.dimension, "dimension n, a positive number or inf");
  cd->add_option("--vertex", o.vertex, "comma separated vertex ids");

  auto* heat = app.add_subcommand("heat", "heat semigroup values and masses");
  add_graph_options(heat, o);
  heat->add_option("--t", o.t_list, "comma separated times");
  heat->add_option("--f", o.f, "initial function");
  heat->add_option("--indicator", o.indicator, "use the indicator of this vertex as initial function");
  heat->add_option("--vertex", o.vertex, "report the heat mass P_t1 at this vertex");
  heat->add_option("--dirichlet", o.dirichlet, "Dirichlet domain, comma separated vertex ids");

  auto* verify = app.add_subcommand("verify-estimates", "check the four gradient estimates on a corpus");
  add_graph_options(verify, o);
  add_sign_options(verify, o);
  verify->add_option("--dimension", o.dimension, "dimension n, a positive number or inf");
  verify->add_option("--t", o.t_list, "comma separated times");
  verify->add_option("--f", o.f, "single nonnegative function instead of the standard corpus");
  verify->add_option("--seed", o.seed, "seed for the random corpus");
  verify->add_option("--random-count", o.random_count, "random functions in the corpus");
  verify->add_option("--smoothing", o.smoothing, "smoothing time for heat-smoothed indicators");
  verify->add_option("--jobs", o.jobs, "worker threads");

  auto* green = app.add_subcommand("green-check", "compare the three sides of Green's formula");
  add_graph_options(green, o);
  green->add_option("--f", o.f, "function f (random if omitted)");
  green->add_option("--h", o.h, "function h (random if omitted)");
  green->add_option("--seed", o.seed, "seed for random functions");

  auto* ec = app.add_subcommand("ec-check", "ellipticity constant against the adjacency operator norm");
  add_graph_options(ec, o);

  auto* cutoff = app.add_subcommand("cutoff", "build the heat-kernel cutoff function");
  add_graph_options(cutoff, o);
  cutoff->add_option("--target", o.target, "set S, comma separated vertex ids");
  cutoff->add_option("--source", o.source, "set U, defaults to all vertices");
  cutoff->add_option("--epsilon", o.epsilon, "gradient bound epsilon")->check(CLI::PositiveNumber);

  auto* finite = app.add_subcommand("finiteness", "quantitative finite-measure mechanism under CD(K, inf)");
  add_graph_options(finite, o);
  add_sign_options(finite, o);
  finite->add_option("--epsilon", o.epsilon_list, "comma separated epsilon grid");
  finite->add_option("--seed", o.seed, "seed for Jensen samples");
  finite->add_option("--samples", o.samples, "random functions for the Jensen check");

  auto* taylor = app.add_subcommand("taylor-check", "small-time expansion of the heat variance");
  add_graph_options(taylor, o);
  add_sign_options(taylor, o);
  taylor->add_option("--f", o.f, "nonnegative function");
  taylor->add_option("--vertex", o.vertex, "vertex id");

  auto* gen = app.add_subcommand("generate", "write a generated graph as JSON");
  gen->add_option("--family", o.family, "path, cycle, complete, star, hypercube, weighted_tree or random")
      ->required();
  gen->add_option("--size", o.size, "size parameter of the family")->required();
  gen->add_option("--profile", o.profile, "measure profile: unit or normalizing");
  gen->add_option("--seed", o.seed, "seed for random weights");
  gen->add_option("--edge-probability", o.edge_probability, "extra edge probability for random graphs");

  std::vector<const char*> argv{"bemery"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (*validate) return cmd_validate(o, out, err);
    if (*curvature) return cmd_curvature(o, out, err);
    if (*cd) return cmd_cd_check(o, out, err);
    if (*heat) return cmd_heat(o, out, err);
    if (*verify) return cmd_verify_estimates(o, out, err);
    if (*green) return cmd_green_check(o, out, err);
    if (*ec) return cmd_ec_check(o, out, err);
    if (*cutoff) return cmd_cutoff(o, out, err);
    if (*finite) return cmd_finiteness(o, out, err);
    if (*taylor) return cmd_taylor_check(o, out, err);
    if (*gen) return cmd_generate(o, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.message << "\n";
    return kExitInput;
  } catch (const ApiError& e) {
    err << "error (" << bem_status_name(e.status) << "): " << e.message << "\n";
    return kExitInput;
  }
  err << "error: no command\n";
  return kExitInput;
}

}  // namespace bemery::cli
