#pragma once

#include <string>
#include <string_view>

#include "bemery/graph.hpp"

namespace bemery {

inline constexpr int kGraphFormatVersion = 1;

// Edge-list text: one "u v weight" per line; measure text: one "v m" per line.
// '#' starts a comment. Vertex order follows the measure text. Throws
// Error(parse) with "<source>:<line>: ..." locations.
RawGraph parse_edge_list(std::string_view edges, std::string_view measures);

// JSON document {"format_version": 1, "vertices": [{"id", "measure"}],
// "edges": [{"u", "v", "weight"}]}. Throws Error(parse) naming the field.
RawGraph parse_json_document(std::string_view text);

// Parse then validate; validation failures throw Error(validation).
WeightedGraph parse_graph_json(std::string_view text);
WeightedGraph parse_graph_edge_list(std::string_view edges, std::string_view measures);

// Serialized with round-trip precision; parse_graph_json inverts it exactly.
std::string to_json_document(const WeightedGraph& g);
std::string to_edge_list(const WeightedGraph& g);
std::string to_measure_list(const WeightedGraph& g);

}  // namespace bemery
