#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace bemery {

using VertexIndex = std::size_t;

// Unvalidated graph data as it arrives from a file or a caller. Each entry
// states b(from, to) = weight; the reverse entry may be omitted, in which
// case the pair is taken to be symmetric.
struct RawVertex {
  std::string id;
  double measure = 0.0;
};

struct RawEntry {
  std::string from;
  std::string to;
  double weight = 0.0;
};

struct RawGraph {
  std::vector<RawVertex> vertices;
  std::vector<RawEntry> entries;
};

// Returns one human readable description per violated invariant; empty iff
// the data describes a valid weighted graph.
std::vector<std::string> validate(const RawGraph& raw);

struct Neighbor {
  VertexIndex vertex;
  double weight;
};

struct Edge {
  VertexIndex u;
  VertexIndex v;
  double weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A finite graph b over a discrete measure space (X, m).
///
/// Vertices carry opaque string ids mapped to dense indices 0..N-1. Each
/// unordered pair with b > 0 is stored exactly once, so symmetry and the
/// zero diagonal hold by construction. Immutable after construction.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  // Throws Error(validation) when ids repeat, a measure is not strictly
  // positive, an edge is a loop, repeats a pair, or has weight <= 0.
  WeightedGraph(std::vector<std::string> ids, std::vector<double> measures,
                std::vector<Edge> edges);

  // Throws Error(validation) with every violation from validate(raw).
  static WeightedGraph from_raw(const RawGraph& raw);

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }

  const std::string& id(VertexIndex x) const;
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::optional<VertexIndex> find(std::string_view id) const;
  // Throws Error(unknown_vertex).
  VertexIndex index_of(std::string_view id) const;

  double measure(VertexIndex x) const;
  const std::vector<double>& measures() const noexcept { return measures_; }

  std::span<const Neighbor> neighbors(VertexIndex x) const;
  // b(x, y); zero when x and y are not adjacent.
  double weight(VertexIndex x, VertexIndex y) const;

  // Unordered pairs with u < v, sorted lexicographically.
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  // Copy with every weight multiplied by factor > 0.
  WeightedGraph scaled_weights(double factor) const;

  void check_vertex(VertexIndex x) const;

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
    return a.ids_ == b.ids_ && a.measures_ == b.measures_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<std::string> ids_;
  std::vector<double> measures_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, VertexIndex> index_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
};

/// Weighted vertex degree Deg(x) = (1/m(x)) sum_y b(x, y).
double degree(const WeightedGraph& g, VertexIndex x);

// Vertices at combinatorial distance <= radius from x, in increasing index
// order.
std::vector<VertexIndex> ball(const WeightedGraph& g, VertexIndex x, std::size_t radius);

// Throws Error(invalid_argument) on the empty graph.
bool is_connected(const WeightedGraph& g);

struct EllipticityCertificate {
  double constant = 0.0;
  std::optional<std::pair<VertexIndex, VertexIndex>> witness_edge;
};

// Smallest C with b(x,y) <= C m(x) m(y) for all x, y.
EllipticityCertificate ellipticity_constant(const WeightedGraph& g);

}  // namespace bemery
