#include "bemery/graph_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "bemery/error.hpp"

namespace bemery {

namespace {

using nlohmann::json;

std::vector<std::string_view> tokens_of(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

[[noreturn]] void parse_fail(std::string_view source, std::size_t line, const std::string& what) {
  fail(ErrorCode::parse, std::string(source) + ":" + std::to_string(line) + ": " + what);
}

double number_of(std::string_view token, std::string_view source, std::size_t line) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    parse_fail(source, line, "'" + std::string(token) + "' is not a number");
  }
  return value;
}

// Calls visit(line_number, tokens) for each non-blank, non-comment line.
template <typename Visit>
void for_each_record(std::string_view text, Visit visit) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = tokens_of(line);
    if (!tokens.empty()) visit(line_no, tokens);
    if (end == text.size()) break;
    start = end + 1;
  }
}

const json& field(const json& object, const char* key, const std::string& where) {
  if (!object.is_object()) fail(ErrorCode::parse, where + ": expected an object");
  auto it = object.find(key);
  if (it == object.end()) fail(ErrorCode::parse, where + "." + key + ": missing field");
  return *it;
}

double number_field(const json& object, const char* key, const std::string& where) {
  const json& value = field(object, key, where);
  if (!value.is_number()) fail(ErrorCode::parse, where + "." + key + ": expected a number");
  return value.get<double>();
}

std::string string_field(const json& object, const char* key, const std::string& where) {
  const json& value = field(object, key, where);
  if (!value.is_string()) fail(ErrorCode::parse, where + "." + key + ": expected a string");
  return value.get<std::string>();
}

void throw_if_invalid(const RawGraph& raw) {
  auto violations = validate(raw);
  if (violations.empty()) return;
  std::string text;
  for (const auto& v : violations) text += (text.empty() ? "" : "; ") + v;
  fail(ErrorCode::validation, text);
}

}  // namespace

RawGraph parse_edge_list(std::string_view edges, std::string_view measures) {
  RawGraph raw;
  for_each_record(measures, [&](std::size_t line, const std::vector<std::string_view>& t) {
    if (t.size() != 2) parse_fail("measures", line, "expected 'v m'");
    raw.vertices.push_back({std::string(t[0]), number_of(t[1], "measures", line)});
  });
  for_each_record(edges, [&](std::size_t line, const std::vector<std::string_view>& t) {
    if (t.size() != 3) parse_fail("edges", line, "expected 'u v weight'");
    raw.entries.push_back({std::string(t[0]), std::string(t[1]), number_of(t[2], "edges", line)});
  });
  return raw;
}

RawGraph parse_json_document(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::parse, std::string("json: ") + e.what());
  }
  const json& version = field(doc, "format_version", "document");
  if (!version.is_number_integer() || version.get<int>() != kGraphFormatVersion) {
    fail(ErrorCode::parse, "document.format_version: expected " + std::to_string(kGraphFormatVersion));
  }
  RawGraph raw;
  const json& vertices = field(doc, "vertices", "document");
  if (!vertices.is_array()) fail(ErrorCode::parse, "document.vertices: expected an array");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string where = "vertices[" + std::to_string(i) + "]";
    raw.vertices.push_back({string_field(vertices[i], "id", where),
                            number_field(vertices[i], "measure", where)});
  }
  const json& edges = field(doc, "edges", "document");
  if (!edges.is_array()) fail(ErrorCode::parse, "document.edges: expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    raw.entries.push_back({string_field(edges[i], "u", where), string_field(edges[i], "v", where),
                           number_field(edges[i], "weight", where)});
  }
  return raw;
}

WeightedGraph parse_graph_json(std::string_view text) {
  auto raw = parse_json_document(text);
  throw_if_invalid(raw);
  return WeightedGraph::from_raw(raw);
}

WeightedGraph parse_graph_edge_list(std::string_view edges, std::string_view measures) {
  auto raw = parse_edge_list(edges, measures);
  throw_if_invalid(raw);
  return WeightedGraph::from_raw(raw);
}

std::string to_json_document(const WeightedGraph& g) {
  nlohmann::ordered_json doc;
  doc["format_version"] = kGraphFormatVersion;
  nlohmann::ordered_json vertices = nlohmann::ordered_json::array();
  for (VertexIndex x = 0; x < g.size(); ++x) {
    vertices.push_back({{"id", g.id(x)}, {"measure", g.measure(x)}});
  }
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto& e : g.edges()) {
    edges.push_back({{"u", g.id(e.u)}, {"v", g.id(e.v)}, {"weight", e.weight}});
  }
  doc["vertices"] = std::move(vertices);
  doc["edges"] = std::move(edges);
  return doc.dump(2);
}

std::string to_edge_list(const WeightedGraph& g) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& e : g.edges()) out << g.id(e.u) << ' ' << g.id(e.v) << ' ' << e.weight << '\n';
  return out.str();
}

std::string to_measure_list(const WeightedGraph& g) {
  std::ostringstream out;
  out.precision(17);
  for (VertexIndex x = 0; x < g.size(); ++x) out << g.id(x) << ' ' << g.measure(x) << '\n';
  return out.str();
}

}  // namespace bemery
