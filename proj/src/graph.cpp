#include "bemery/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>
#include <tuple>

#include "bemery/error.hpp"

namespace bemery {

namespace {

std::string pair_text(std::string_view a, std::string_view b) {
  std::ostringstream out;
  out << "(" << a << ", " << b << ")";
  return out.str();
}

std::string join(const std::vector<std::string>& items) {
  std::string text;
  for (const auto& item : items) {
    if (!text.empty()) text += "; ";
    text += item;
  }
  return text;
}

}  // namespace

std::vector<std::string> validate(const RawGraph& raw) {
  std::vector<std::string> violations;
  std::unordered_map<std::string, std::size_t> seen;

  for (const auto& v : raw.vertices) {
    if (v.id.empty()) violations.push_back("empty vertex id");
    if (!seen.emplace(v.id, seen.size()).second) {
      violations.push_back("duplicate vertex id '" + v.id + "'");
    }
    if (!std::isfinite(v.measure) || v.measure <= 0.0) {
      std::ostringstream out;
      out << "nonpositive measure at '" << v.id << "' (m = " << v.measure << ")";
      violations.push_back(out.str());
    }
  }

  std::map<std::pair<std::string, std::string>, double> directed;
  std::vector<std::string> missing_reported;
  for (const auto& e : raw.entries) {
    const std::string where = pair_text(e.from, e.to);
    for (const auto* endpoint : {&e.from, &e.to}) {
      if (!seen.contains(*endpoint) &&
          std::find(missing_reported.begin(), missing_reported.end(), *endpoint) ==
              missing_reported.end()) {
        missing_reported.push_back(*endpoint);
        violations.push_back("missing measure for vertex '" + *endpoint +
                             "' referenced by entry " + where);
      }
    }
    if (e.from == e.to) {
      violations.push_back("nonzero diagonal at " + where);
      continue;
    }
    if (!std::isfinite(e.weight) || e.weight <= 0.0) {
      std::ostringstream out;
      out << "nonpositive weight at " << where << " (b = " << e.weight << ")";
      violations.push_back(out.str());
      continue;
    }
    auto [it, inserted] = directed.emplace(std::make_pair(e.from, e.to), e.weight);
    if (!inserted) {
      violations.push_back("duplicate entry " + where);
      continue;
    }
    auto reverse = directed.find({e.to, e.from});
    if (reverse != directed.end() && reverse->second != e.weight) {
      std::ostringstream out;
      out << "asymmetry at " << pair_text(e.to, e.from) << ": conflicting symmetric entries b"
          << pair_text(e.to, e.from) << " = " << reverse->second << " and b" << where << " = "
          << e.weight;
      violations.push_back(out.str());
    }
  }
  return violations;
}

WeightedGraph::WeightedGraph(std::vector<std::string> ids, std::vector<double> measures,
                             std::vector<Edge> edges)
    : ids_(std::move(ids)), measures_(std::move(measures)), edges_(std::move(edges)) {
  std::vector<std::string> violations;
  if (ids_.size() != measures_.size()) {
    fail(ErrorCode::validation, "vertex id and measure counts differ");
  }
  for (VertexIndex i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      violations.push_back("duplicate vertex id '" + ids_[i] + "'");
    }
    if (!std::isfinite(measures_[i]) || measures_[i] <= 0.0) {
      violations.push_back("nonpositive measure at '" + ids_[i] + "'");
    }
  }
  for (auto& e : edges_) {
    if (e.u >= ids_.size() || e.v >= ids_.size()) {
      fail(ErrorCode::validation, "edge endpoint index out of range");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u == e.v) {
      violations.push_back("nonzero diagonal at '" + ids_[e.u] + "'");
    }
    if (!std::isfinite(e.weight) || e.weight <= 0.0) {
      violations.push_back("nonpositive weight at " + pair_text(ids_[e.u], ids_[e.v]));
    }
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v) {
      violations.push_back("duplicate edge " + pair_text(ids_[edges_[i].u], ids_[edges_[i].v]));
    }
  }
  if (!violations.empty()) fail(ErrorCode::validation, join(violations));

  std::vector<std::size_t> counts(ids_.size(), 0);
  for (const auto& e : edges_) {
    ++counts[e.u];
    ++counts[e.v];
  }
  offsets_.assign(ids_.size() + 1, 0);
  for (std::size_t i = 0; i < ids_.size(); ++i) offsets_[i + 1] = offsets_[i] + counts[i];
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& e : edges_) {
    adjacency_[cursor[e.u]++] = {e.v, e.weight};
    adjacency_[cursor[e.v]++] = {e.u, e.weight};
  }
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]),
              [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }
}

WeightedGraph WeightedGraph::from_raw(const RawGraph& raw) {
  auto violations = validate(raw);
  if (!violations.empty()) fail(ErrorCode::validation, join(violations));

  std::vector<std::string> ids;
  std::vector<double> measures;
  std::unordered_map<std::string, VertexIndex> index;
  for (const auto& v : raw.vertices) {
    index.emplace(v.id, ids.size());
    ids.push_back(v.id);
    measures.push_back(v.measure);
  }
  std::map<std::pair<VertexIndex, VertexIndex>, double> pairs;
  for (const auto& e : raw.entries) {
    VertexIndex u = index.at(e.from);
    VertexIndex v = index.at(e.to);
    if (u > v) std::swap(u, v);
    pairs.emplace(std::make_pair(u, v), e.weight);
  }
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [key, w] : pairs) edges.push_back({key.first, key.second, w});
  return WeightedGraph(std::move(ids), std::move(measures), std::move(edges));
}

void WeightedGraph::check_vertex(VertexIndex x) const {
  if (x >= ids_.size()) {
    fail(ErrorCode::unknown_vertex, "vertex index " + std::to_string(x) + " out of range");
  }
}

const std::string& WeightedGraph::id(VertexIndex x) const {
  check_vertex(x);
  return ids_[x];
}

std::optional<VertexIndex> WeightedGraph::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VertexIndex WeightedGraph::index_of(std::string_view id) const {
  auto found = find(id);
  if (!found) fail(ErrorCode::unknown_vertex, "unknown vertex '" + std::string(id) + "'");
  return *found;
}

double WeightedGraph::measure(VertexIndex x) const {
  check_vertex(x);
  return measures_[x];
}

std::span<const Neighbor> WeightedGraph::neighbors(VertexIndex x) const {
  check_vertex(x);
  return {adjacency_.data() + offsets_[x], offsets_[x + 1] - offsets_[x]};
}

double WeightedGraph::weight(VertexIndex x, VertexIndex y) const {
  auto row = neighbors(x);
  check_vertex(y);
  auto it = std::lower_bound(row.begin(), row.end(), y,
                             [](const Neighbor& n, VertexIndex v) { return n.vertex < v; });
  return (it != row.end() && it->vertex == y) ? it->weight : 0.0;
}

WeightedGraph WeightedGraph::scaled_weights(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    fail(ErrorCode::invalid_argument, "weight scale factor must be positive");
  }
  auto edges = edges_;
  for (auto& e : edges) e.weight *= factor;
  return WeightedGraph(ids_, measures_, std::move(edges));
}

double degree(const WeightedGraph& g, VertexIndex x) {
  double sum = 0.0;
  for (const auto& n : g.neighbors(x)) sum += n.weight;
  return sum / g.measure(x);
}

std::vector<VertexIndex> ball(const WeightedGraph& g, VertexIndex x, std::size_t radius) {
  g.check_vertex(x);
  std::vector<std::size_t> distance(g.size(), static_cast<std::size_t>(-1));
  std::deque<VertexIndex> queue{x};
  distance[x] = 0;
  std::vector<VertexIndex> result;
  while (!queue.empty()) {
    VertexIndex u = queue.front();
    queue.pop_front();
    result.push_back(u);
    if (distance[u] == radius) continue;
    for (const auto& n : g.neighbors(u)) {
      if (distance[n.vertex] == static_cast<std::size_t>(-1)) {
        distance[n.vertex] = distance[u] + 1;
        queue.push_back(n.vertex);
      }
    }
  }
  std::sort(result.begin(), result.end());
  return result;
}

bool is_connected(const WeightedGraph& g) {
  if (g.empty()) fail(ErrorCode::invalid_argument, "connectivity of the empty graph");
  return ball(g, 0, g.size()).size() == g.size();
}

EllipticityCertificate ellipticity_constant(const WeightedGraph& g) {
  EllipticityCertificate cert;
  for (const auto& e : g.edges()) {
    double ratio = e.weight / (g.measure(e.u) * g.measure(e.v));
    if (!cert.witness_edge || ratio > cert.constant) {
      cert.constant = ratio;
      cert.witness_edge = std::make_pair(e.u, e.v);
    }
  }
  return cert;
}

}  // namespace bemery
