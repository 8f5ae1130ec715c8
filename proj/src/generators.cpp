#include "bemery/generators.hpp"

#include <random>
#include <string>

#include "bemery/error.hpp"

namespace bemery {

namespace {

std::vector<std::string> numbered_ids(std::size_t n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back("v" + std::to_string(i));
  return ids;
}

std::vector<double> measures_for(MeasureProfile profile, std::size_t n,
                                 const std::vector<Edge>& edges) {
  if (profile == MeasureProfile::unit) return std::vector<double>(n, 1.0);
  std::vector<double> m(n, 0.0);
  for (const auto& e : edges) {
    m[e.u] += e.weight;
    m[e.v] += e.weight;
  }
  for (double value : m) {
    if (value <= 0.0) {
      fail(ErrorCode::invalid_argument, "normalizing measure needs every vertex to have an edge");
    }
  }
  return m;
}

}  // namespace

WeightedGraph generate(Family family, const GeneratorParams& params) {
  const std::size_t k = params.size;
  if (k < 1) fail(ErrorCode::invalid_argument, "generator size must be at least 1");

  std::vector<std::string> ids;
  std::vector<Edge> edges;
  switch (family) {
    case Family::path:
      ids = numbered_ids(k);
      for (std::size_t i = 0; i + 1 < k; ++i) edges.push_back({i, i + 1, 1.0});
      break;
    case Family::cycle:
      if (k < 3) fail(ErrorCode::invalid_argument, "cycle needs at least 3 vertices");
      ids = numbered_ids(k);
      for (std::size_t i = 0; i < k; ++i) edges.push_back({i, (i + 1) % k, 1.0});
      break;
    case Family::complete:
      ids = numbered_ids(k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) edges.push_back({i, j, 1.0});
      break;
    case Family::star:
      ids = numbered_ids(k + 1);
      for (std::size_t i = 1; i <= k; ++i) edges.push_back({0, i, 1.0});
      break;
    case Family::hypercube: {
      if (k > 16) fail(ErrorCode::invalid_argument, "hypercube dimension above 16");
      const std::size_t n = std::size_t{1} << k;
      for (std::size_t i = 0; i < n; ++i) {
        std::string label(k, '0');
        for (std::size_t bit = 0; bit < k; ++bit)
          if (i & (std::size_t{1} << bit)) label[k - 1 - bit] = '1';
        ids.push_back(label);
        for (std::size_t bit = 0; bit < k; ++bit) {
          std::size_t j = i ^ (std::size_t{1} << bit);
          if (i < j) edges.push_back({i, j, 1.0});
        }
      }
      break;
    }
    case Family::weighted_tree: {
      if (!(params.weight_min > 0.0) || params.weight_max < params.weight_min) {
        fail(ErrorCode::invalid_argument, "weight range must satisfy 0 < min <= max");
      }
      ids = numbered_ids(k);
      std::mt19937_64 rng(params.seed);
      std::uniform_real_distribution<double> weight(params.weight_min, params.weight_max);
      for (std::size_t i = 1; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> parent(0, i - 1);
        std::size_t p = parent(rng);
        edges.push_back({p, i, weight(rng)});
      }
      break;
    }
  }
  auto measures = measures_for(params.profile, ids.size(), edges);
  return WeightedGraph(std::move(ids), std::move(measures), std::move(edges));
}

std::optional<Family> parse_family(std::string_view name) {
  if (name == "path") return Family::path;
  if (name == "cycle") return Family::cycle;
  if (name == "complete") return Family::complete;
  if (name == "star") return Family::star;
  if (name == "hypercube") return Family::hypercube;
  if (name == "weighted_tree") return Family::weighted_tree;
  return std::nullopt;
}

std::string_view family_name(Family family) {
  switch (family) {
    case Family::path: return "path";
    case Family::cycle: return "cycle";
    case Family::complete: return "complete";
    case Family::star: return "star";
    case Family::hypercube: return "hypercube";
    case Family::weighted_tree: return "weighted_tree";
  }
  return "unknown";
}

std::optional<MeasureProfile> parse_profile(std::string_view name) {
  if (name == "unit") return MeasureProfile::unit;
  if (name == "normalizing") return MeasureProfile::normalizing;
  return std::nullopt;
}

WeightedGraph random_connected_graph(const RandomGraphParams& params) {
  const std::size_t n = params.vertices;
  if (n < 1) fail(ErrorCode::invalid_argument, "random graph needs at least one vertex");
  if (!(params.weight_min > 0.0) || params.weight_max < params.weight_min ||
      !(params.measure_min > 0.0) || params.measure_max < params.measure_min) {
    fail(ErrorCode::invalid_argument, "weight and measure ranges must be positive");
  }
  std::mt19937_64 rng(params.seed);
  std::uniform_real_distribution<double> weight(params.weight_min, params.weight_max);
  std::uniform_real_distribution<double> measure(params.measure_min, params.measure_max);
  std::bernoulli_distribution extra(params.extra_edge_probability);

  std::vector<std::vector<bool>> adjacent(n, std::vector<bool>(n, false));
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> parent(0, i - 1);
    std::size_t p = parent(rng);
    adjacent[p][i] = adjacent[i][p] = true;
    edges.push_back({p, i, weight(rng)});
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!adjacent[i][j] && extra(rng)) edges.push_back({i, j, weight(rng)});

  std::vector<double> m(n);
  for (auto& value : m) value = measure(rng);
  return WeightedGraph(numbered_ids(n), std::move(m), std::move(edges));
}

}  // namespace bemery
