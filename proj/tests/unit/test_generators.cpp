#include <doctest.h>

#include "bemery/error.hpp"
#include "bemery/generators.hpp"
#include "bemery/graph_io.hpp"

using namespace bemery;

namespace {

RawGraph to_raw(const WeightedGraph& g) {
  RawGraph raw;
  for (VertexIndex x = 0; x < g.size(); ++x) raw.vertices.push_back({g.id(x), g.measure(x)});
  for (const auto& e : g.edges()) raw.entries.push_back({g.id(e.u), g.id(e.v), e.weight});
  return raw;
}

std::vector<WeightedGraph> sample() {
  std::vector<WeightedGraph> out;
  for (auto profile : {MeasureProfile::unit, MeasureProfile::normalizing}) {
    GeneratorParams p;
    p.profile = profile;
    p.seed = 3;
    for (std::size_t n : {2, 5, 9}) {
      p.size = n;
      out.push_back(generate(Family::path, p));
      out.push_back(generate(Family::complete, p));
      out.push_back(generate(Family::star, p));
      out.push_back(generate(Family::weighted_tree, p));
    }
    for (std::size_t n : {3, 6}) {
      p.size = n;
      out.push_back(generate(Family::cycle, p));
    }
    for (std::size_t d : {1, 2, 4}) {
      p.size = d;
      out.push_back(generate(Family::hypercube, p));
    }
  }
  return out;
}

}  // namespace

TEST_CASE("path of 3 with unit profile") {
  const auto g = generate(Family::path, {3});
  CHECK(g.ids() == std::vector<std::string>{"v0", "v1", "v2"});
  CHECK(g.edges() == std::vector<Edge>{{0, 1, 1.0}, {1, 2, 1.0}});
  CHECK(g.measures() == std::vector<double>{1, 1, 1});
}

TEST_CASE("complete graph on 2 vertices is a single edge") {
  const auto g = generate(Family::complete, {2});
  CHECK(g.edges() == std::vector<Edge>{{0, 1, 1.0}});
}

TEST_CASE("hypercube of dimension 2 with normalizing measure") {
  GeneratorParams p{2, MeasureProfile::normalizing};
  const auto g = generate(Family::hypercube, p);
  CHECK(g.size() == 4);
  CHECK(g.edges().size() == 4);
  for (VertexIndex x = 0; x < 4; ++x) {
    CHECK(g.measure(x) == 2.0);
    CHECK(g.neighbors(x).size() == 2);
  }
  CHECK(g.find("00").has_value());
  CHECK(g.weight(g.index_of("00"), g.index_of("11")) == 0.0);
}

TEST_CASE("star, cycle and weighted tree shapes") {
  auto g = generate(Family::star, {4});
  CHECK(g.size() == 5);
  CHECK(g.neighbors(0).size() == 4);
  g = generate(Family::cycle, {5});
  CHECK(g.edges().size() == 5);
  GeneratorParams p{12};
  p.seed = 9;
  g = generate(Family::weighted_tree, p);
  CHECK(g.edges().size() == 11);
  CHECK(is_connected(g));
  for (const auto& e : g.edges()) {
    CHECK(e.weight >= 0.1);
    CHECK(e.weight <= 2.0);
  }
  CHECK(generate(Family::weighted_tree, p) == g);
}

TEST_CASE("generated graphs validate and round-trip") {
  for (const auto& g : sample()) {
    CHECK(validate(to_raw(g)).empty());
    CHECK(parse_graph_json(to_json_document(g)) == g);
    CHECK(parse_graph_edge_list(to_edge_list(g), to_measure_list(g)) == g);
  }
}

TEST_CASE("normalizing measure has unit degree") {
  for (const auto& g : sample()) {
    bool normalizing = true;
    for (VertexIndex x = 0; x < g.size(); ++x) {
      double s = 0;
      for (const auto& nb : g.neighbors(x)) s += nb.weight;
      normalizing = normalizing && std::abs(s - g.measure(x)) < 1e-14;
    }
    if (!normalizing) continue;
    for (VertexIndex x = 0; x < g.size(); ++x) CHECK(degree(g, x) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("invalid generator parameters") {
  CHECK_THROWS_AS(generate(Family::path, {0}), Error);
  CHECK_THROWS_AS(generate(Family::cycle, {2}), Error);
  CHECK_THROWS_AS(generate(Family::hypercube, {17}), Error);
  CHECK_THROWS_AS(generate(Family::path, {1, MeasureProfile::normalizing}), Error);
  GeneratorParams p{4};
  p.weight_min = 3;
  CHECK_THROWS_AS(generate(Family::weighted_tree, p), Error);
}

TEST_CASE("family and profile names") {
  for (auto f : {Family::path, Family::cycle, Family::complete, Family::star, Family::hypercube,
                 Family::weighted_tree}) {
    CHECK(parse_family(family_name(f)) == f);
  }
  CHECK_FALSE(parse_family("torus").has_value());
  CHECK(parse_profile("normalizing") == MeasureProfile::normalizing);
  CHECK_FALSE(parse_profile("heavy").has_value());
}

TEST_CASE("random connected graphs") {
  RandomGraphParams p;
  p.vertices = 30;
  p.seed = 42;
  const auto g = random_connected_graph(p);
  CHECK(g.size() == 30);
  CHECK(is_connected(g));
  for (VertexIndex x = 0; x < g.size(); ++x) {
    CHECK(g.measure(x) >= 0.1);
    CHECK(g.measure(x) <= 2.0);
  }
  CHECK(random_connected_graph(p) == g);
  p.seed = 43;
  CHECK_FALSE(random_connected_graph(p) == g);
  p.vertices = 0;
  CHECK_THROWS_AS(random_connected_graph(p), Error);
}
