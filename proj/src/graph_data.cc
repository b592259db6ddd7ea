/* Copyright 2026 The ShardGNN Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "shardgnn/graph_data.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include <fmt/format.h>

namespace shardgnn {
namespace {

[[noreturn]] void ParseFail(size_t line, const std::string& what) {
  throw Error(ErrorCode::kParse, fmt::format("line {}: {}", line, what));
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return out;
}

template <typename T>
T ParseNumber(std::string_view field, size_t line, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    ParseFail(line, fmt::format("bad {} '{}'", what, field));
  }
  return value;
}

void ParseFeatures(std::string_view field, size_t line, std::vector<double>& out) {
  out.clear();
  if (field.empty()) return;
  size_t start = 0;
  while (true) {
    size_t comma = field.find(',', start);
    auto token = field.substr(start, comma == std::string_view::npos
                                         ? std::string_view::npos
                                         : comma - start);
    out.push_back(ParseNumber<double>(token, line, "feature value"));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
}

// Iterates data lines, stripping a trailing CR and skipping comments.
template <typename Fn>
void ForEachLine(std::istream& in, Fn&& fn) {
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.empty() || view.front() == '#') continue;
    fn(view, number);
  }
  if (in.bad()) throw Error(ErrorCode::kIo, "read failure");
}

void WriteFeatures(std::span<const double> attr, std::string& buf) {
  for (size_t i = 0; i < attr.size(); ++i) {
    if (i) buf.push_back(',');
    fmt::format_to(std::back_inserter(buf), "{}", attr[i]);
  }
}

}  // namespace

void GraphData::AddVertex(VertexId id, VertexType type, std::span<const double> attr) {
  if (attr.size() != vertex_arity_) {
    throw Error(ErrorCode::kSchema,
                fmt::format("vertex {} has {} attributes, expected {}", id,
                            attr.size(), vertex_arity_));
  }
  vertices_.push_back({id, type});
  vertex_attrs_.insert(vertex_attrs_.end(), attr.begin(), attr.end());
}

void GraphData::AddEdge(VertexId src, VertexId dst, EdgeType type, double weight,
                        std::span<const double> attr) {
  if (attr.size() != edge_arity_) {
    throw Error(ErrorCode::kSchema,
                fmt::format("edge {}->{} has {} attributes, expected {}", src, dst,
                            attr.size(), edge_arity_));
  }
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw Error(ErrorCode::kSchema,
                fmt::format("edge {}->{} has invalid weight {}", src, dst, weight));
  }
  edges_.push_back({src, dst, type, weight});
  edge_attrs_.insert(edge_attrs_.end(), attr.begin(), attr.end());
}

std::vector<VertexId> GraphData::AllVertexIds() const {
  std::vector<VertexId> ids;
  ids.reserve(vertices_.size() + 2 * edges_.size());
  for (const auto& v : vertices_) ids.push_back(v.id);
  for (const auto& e : edges_) {
    ids.push_back(e.src);
    ids.push_back(e.dst);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

void GraphData::Reserve(size_t vertices, size_t edges) {
  vertices_.reserve(vertices);
  vertex_attrs_.reserve(vertices * vertex_arity_);
  edges_.reserve(edges);
  edge_attrs_.reserve(edges * edge_arity_);
}

void GraphData::set_vertex_arity(size_t arity) {
  if (!vertices_.empty() && arity != vertex_arity_) {
    throw Error(ErrorCode::kSchema, "vertex arity is fixed once vertices exist");
  }
  vertex_arity_ = arity;
}

void GraphData::set_edge_arity(size_t arity) {
  if (!edges_.empty() && arity != edge_arity_) {
    throw Error(ErrorCode::kSchema, "edge arity is fixed once edges exist");
  }
  edge_arity_ = arity;
}

void ValidateHeterogeneous(const GraphData& graph) {
  if (graph.vertex_types().size() < 2 && graph.edge_types().size() < 2) {
    throw Error(ErrorCode::kSchema,
                "a heterogeneous graph needs at least two vertex types or two "
                "edge types");
  }
}

void ReadVertices(std::istream& in, GraphData& graph) {
  std::vector<double> attr;
  bool arity_known = !graph.vertices().empty();
  ForEachLine(in, [&](std::string_view line, size_t number) {
    auto fields = SplitTabs(line);
    if (fields.size() < 2 || fields.size() > 3) {
      ParseFail(number, fmt::format("expected 3 tab-separated fields, got {}",
                                    fields.size()));
    }
    auto id = ParseNumber<VertexId>(fields[0], number, "vertex id");
    ParseFeatures(fields.size() == 3 ? fields[2] : std::string_view(), number, attr);
    if (!arity_known) {
      graph.set_vertex_arity(attr.size());
      arity_known = true;
    }
    if (attr.size() != graph.vertex_arity()) {
      ParseFail(number, fmt::format("vertex has {} features, expected {}",
                                    attr.size(), graph.vertex_arity()));
    }
    VertexType type{graph.vertex_types().Intern(fields[1])};
    graph.AddVertex(id, type, attr);
  });
}

void ReadEdges(std::istream& in, GraphData& graph) {
  std::vector<double> attr;
  bool arity_known = !graph.edges().empty();
  ForEachLine(in, [&](std::string_view line, size_t number) {
    auto fields = SplitTabs(line);
    if (fields.size() < 4 || fields.size() > 5) {
      ParseFail(number, fmt::format("expected 5 tab-separated fields, got {}",
                                    fields.size()));
    }
    auto src = ParseNumber<VertexId>(fields[0], number, "source id");
    auto dst = ParseNumber<VertexId>(fields[1], number, "destination id");
    auto weight = ParseNumber<double>(fields[3], number, "weight");
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
      ParseFail(number, fmt::format("weight must be finite and >= 0, got {}", weight));
    }
    ParseFeatures(fields.size() == 5 ? fields[4] : std::string_view(), number, attr);
    if (!arity_known) {
      graph.set_edge_arity(attr.size());
      arity_known = true;
    }
    if (attr.size() != graph.edge_arity()) {
      ParseFail(number, fmt::format("edge has {} attributes, expected {}",
                                    attr.size(), graph.edge_arity()));
    }
    EdgeType type{graph.edge_types().Intern(fields[2])};
    graph.AddEdge(src, dst, type, weight, attr);
  });
}

GraphData LoadGraph(const std::optional<std::string>& vertex_path,
                    const std::string& edge_path) {
  GraphData graph;
  if (vertex_path) {
    std::ifstream vin(*vertex_path);
    if (!vin) throw Error(ErrorCode::kIo, "cannot open " + *vertex_path);
    try {
      ReadVertices(vin, graph);
    } catch (const Error& e) {
      throw Error(e.code(), *vertex_path + ": " + e.what());
    }
  }
  std::ifstream ein(edge_path);
  if (!ein) throw Error(ErrorCode::kIo, "cannot open " + edge_path);
  try {
    ReadEdges(ein, graph);
  } catch (const Error& e) {
    throw Error(e.code(), edge_path + ": " + e.what());
  }
  return graph;
}

void WriteVertices(const GraphData& graph, std::ostream& out) {
  std::string buf;
  for (size_t i = 0; i < graph.vertices().size(); ++i) {
    const auto& v = graph.vertices()[i];
    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{}\t{}\t", v.id,
                   graph.vertex_types().Name(v.type.code));
    WriteFeatures(graph.vertex_attr(i), buf);
    buf.push_back('\n');
    out << buf;
  }
}

void WriteEdges(const GraphData& graph, std::ostream& out) {
  std::string buf;
  for (size_t i = 0; i < graph.edges().size(); ++i) {
    const auto& e = graph.edges()[i];
    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{}\t{}\t{}\t{}\t", e.src, e.dst,
                   graph.edge_types().Name(e.type.code), e.weight);
    WriteFeatures(graph.edge_attr(i), buf);
    buf.push_back('\n');
    out << buf;
  }
}

}  // namespace shardgnn
