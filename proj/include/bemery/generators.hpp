#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "bemery/graph.hpp"

namespace bemery {

enum class Family { path, cycle, complete, star, hypercube, weighted_tree };

enum class MeasureProfile {
  unit,         // m = 1
  normalizing,  // m(x) = sum_y b(x, y)
};

struct GeneratorParams {
  // path/cycle/complete: vertex count; star: leaf count; hypercube: dimension;
  // weighted_tree: vertex count.
  std::size_t size = 1;
  MeasureProfile profile = MeasureProfile::unit;
  // Random weights of weighted_tree are uniform in [weight_min, weight_max].
  std::uint64_t seed = 0;
  double weight_min = 0.1;
  double weight_max = 2.0;
};

// Vertex ids are "v0", "v1", ... except for hypercubes, whose ids are the
// d-bit binary labels. Throws Error(invalid_argument) on bad parameters.
WeightedGraph generate(Family family, const GeneratorParams& params);

std::optional<Family> parse_family(std::string_view name);
std::string_view family_name(Family family);
std::optional<MeasureProfile> parse_profile(std::string_view name);

struct RandomGraphParams {
  std::size_t vertices = 10;
  // Probability of each non-tree pair being an edge, on top of a random
  // spanning tree that keeps the graph connected.
  double extra_edge_probability = 0.2;
  double weight_min = 0.1;
  double weight_max = 2.0;
  double measure_min = 0.1;
  double measure_max = 2.0;
  std::uint64_t seed = 0;
};

WeightedGraph random_connected_graph(const RandomGraphParams& params);

}  // namespace bemery
