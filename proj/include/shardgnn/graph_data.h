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

#ifndef SHARDGNN_GRAPH_DATA_H_
#define SHARDGNN_GRAPH_DATA_H_

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "shardgnn/common.h"

namespace shardgnn {

struct VertexRecord {
  VertexId id = 0;
  VertexType type;
};

struct EdgeRecord {
  VertexId src = 0;
  VertexId dst = 0;
  EdgeType type;
  double weight = 1.0;
};

// Whole-graph ingest buffer: what the TSV files contain, before partitioning.
// Attributes are stored flat with a fixed arity per kind.
class GraphData {
 public:
  GraphData() = default;
  GraphData(size_t vertex_arity, size_t edge_arity)
      : vertex_arity_(vertex_arity), edge_arity_(edge_arity) {}

  void AddVertex(VertexId id, VertexType type, std::span<const double> attr = {});
  void AddEdge(VertexId src, VertexId dst, EdgeType type, double weight,
               std::span<const double> attr = {});

  std::span<const double> vertex_attr(size_t i) const {
    return {vertex_attrs_.data() + i * vertex_arity_, vertex_arity_};
  }
  std::span<const double> edge_attr(size_t i) const {
    return {edge_attrs_.data() + i * edge_arity_, edge_arity_};
  }

  const std::vector<VertexRecord>& vertices() const { return vertices_; }
  const std::vector<EdgeRecord>& edges() const { return edges_; }
  size_t vertex_arity() const { return vertex_arity_; }
  size_t edge_arity() const { return edge_arity_; }

  // Every vertex id seen as a declared vertex or an edge endpoint, sorted.
  std::vector<VertexId> AllVertexIds() const;

  TypeRegistry& vertex_types() { return vertex_types_; }
  TypeRegistry& edge_types() { return edge_types_; }
  const TypeRegistry& vertex_types() const { return vertex_types_; }
  const TypeRegistry& edge_types() const { return edge_types_; }

  void Reserve(size_t vertices, size_t edges);

  // Arity can only change while no records of that kind exist.
  void set_vertex_arity(size_t arity);
  void set_edge_arity(size_t arity);

 private:
  size_t vertex_arity_ = 0;
  size_t edge_arity_ = 0;
  std::vector<VertexRecord> vertices_;
  std::vector<double> vertex_attrs_;
  std::vector<EdgeRecord> edges_;
  std::vector<double> edge_attrs_;
  TypeRegistry vertex_types_;
  TypeRegistry edge_types_;
};

// Throws kSchema unless the graph has at least two vertex types or two edge
// types.
void ValidateHeterogeneous(const GraphData& graph);

// Vertex TSV: `id <TAB> type <TAB> f1,...,fk`.
// Edge TSV: `src <TAB> dst <TAB> type <TAB> weight <TAB> g1,...,gm`.
// `#` lines and blank lines are skipped. Malformed lines raise kParse with
// the 1-based line number.
void ReadVertices(std::istream& in, GraphData& graph);
void ReadEdges(std::istream& in, GraphData& graph);
GraphData LoadGraph(const std::optional<std::string>& vertex_path,
                    const std::string& edge_path);

void WriteVertices(const GraphData& graph, std::ostream& out);
void WriteEdges(const GraphData& graph, std::ostream& out);

}  // namespace shardgnn

#endif  // SHARDGNN_GRAPH_DATA_H_
