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

#ifndef SHARDGNN_SHARDED_GRAPH_H_
#define SHARDGNN_SHARDED_GRAPH_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "shardgnn/attribute_index.h"
#include "shardgnn/common.h"

namespace shardgnn {

inline constexpr uint32_t kNoAttribute = std::numeric_limits<uint32_t>::max();

// One out-edge as stored in a shard. `weight` is the immutable edge weight;
// `sampling_weight` starts equal to it and is changed only by weight updates.
struct AdjacencyRecord {
  VertexId neighbor = 0;
  EdgeType edge_type;
  double weight = 1.0;
  uint32_t edge_attr_idx = kNoAttribute;
  double sampling_weight = 1.0;
};

// Attribute storage cost of one shard, comparing an adjacency table that
// embeds attribute vectors with the deduplicated index layout.
struct StorageReport {
  uint64_t combined_bytes = 0;
  uint64_t separated_bytes = 0;
  uint64_t n = 0;          // owned vertices
  uint64_t records = 0;    // adjacency records
  double n_d = 0.0;        // mean records per vertex
  double n_l = 0.0;        // mean attribute length, in values
  uint64_t n_a = 0;        // distinct attributes over both indices
};

// Width of one attribute index (and one vertex id) in the storage accounting.
inline constexpr uint64_t kIndexBytes = 8;

using OwnerFn = std::function<ShardId(VertexId)>;

struct ShardOptions {
  size_t vertex_attr_cache = 4096;
  size_t edge_attr_cache = 4096;
};

// One worker's partition of an attributed heterogeneous graph: adjacency for
// owned vertices in CSR form, attribute indices, and replicated out-neighbor
// lists of selected remote vertices.
//
// Building (Add*/Finalize) is single-threaded. After Finalize the structure is
// immutable; sampling weights, attribute caches and the remote cache are
// written only by the owning shard's consumers.
class ShardedGraph {
 public:
  ShardedGraph(ShardId shard_id, size_t vertex_arity, size_t edge_arity,
               ShardOptions options, OwnerFn owner);

  ShardedGraph(ShardedGraph&&) = default;
  ShardedGraph& operator=(ShardedGraph&&) = default;

  // Build phase.
  void AddVertex(VertexId v, VertexType type, std::span<const double> attr);
  void AddEdge(VertexId src, VertexId dst, EdgeType type, double weight,
               std::span<const double> attr);
  void Reserve(size_t vertices, size_t edges);
  void SetDegree(VertexId v, uint64_t degree);
  void SetDestinationTypes(EdgeType type, std::vector<VertexType> dst_types);
  void Finalize();

  // Replaces the cached hop lists of a non-owned vertex. hops[j] holds the
  // hop-(j+1) out-neighbor records; attribute indices must refer to this
  // shard's edge index.
  void SetCachedHops(VertexId v, std::vector<std::vector<AdjacencyRecord>> hops);
  void ClearRemoteCache();

  ShardId shard_id() const { return shard_id_; }
  bool finalized() const { return finalized_; }
  bool Owns(VertexId v) const { return local_.count(v) > 0; }
  bool IsCached(VertexId v) const { return remote_cache_.count(v) > 0; }
  ShardId OwnerOf(VertexId v) const { return owner_(v); }
  const OwnerFn& owner_fn() const { return owner_; }

  // Owned adjacency, sorted by (neighbor, edge type). Throws NotLocalError if
  // `v` is not owned.
  std::span<const AdjacencyRecord> OwnedNeighbors(VertexId v) const;
  std::span<AdjacencyRecord> MutableNeighbors(VertexId v);

  // Owned adjacency if owned, else cached hop-1 list if cached, else
  // NotLocalError carrying the owner.
  std::vector<AdjacencyRecord> Neighbors(VertexId v,
                                         std::optional<EdgeType> type = std::nullopt) const;

  const std::vector<std::vector<AdjacencyRecord>>* CachedHops(VertexId v) const;
  std::vector<VertexId> CachedVertices() const;

  // Non-owned vertices that appear as neighbors in owned adjacency, sorted.
  std::vector<VertexId> ReferencedRemoteVertices() const;

  const std::vector<VertexId>& owned_vertices() const { return owned_; }
  VertexType vertex_type(VertexId v) const;
  uint32_t vertex_attr_idx(VertexId v) const;
  uint64_t degree(VertexId v) const;
  const std::vector<VertexType>* destination_types(EdgeType type) const;

  AttributeIndex& vertex_attributes() { return attr_v_; }
  AttributeIndex& edge_attributes() { return attr_e_; }
  const AttributeIndex& vertex_attributes() const { return attr_v_; }
  const AttributeIndex& edge_attributes() const { return attr_e_; }

  size_t num_edges() const { return records_.size(); }
  StorageReport Report() const;

  // Content digest over owned vertices, types, attributes and adjacency.
  uint64_t Digest() const;

 private:
  uint32_t LocalIndex(VertexId v) const;

  struct PendingEdge {
    VertexId src;
    AdjacencyRecord record;
  };

  ShardId shard_id_;
  ShardOptions options_;
  OwnerFn owner_;
  bool finalized_ = false;

  std::vector<VertexId> owned_;
  std::unordered_map<VertexId, uint32_t> local_;
  std::vector<VertexType> vertex_type_;
  std::vector<uint32_t> vertex_attr_idx_;
  std::vector<uint64_t> degree_;
  std::vector<uint64_t> offsets_;
  std::vector<AdjacencyRecord> records_;
  std::unordered_map<uint16_t, std::vector<VertexType>> dst_types_;

  AttributeIndex attr_v_;
  AttributeIndex attr_e_;
  std::unordered_map<VertexId, std::vector<std::vector<AdjacencyRecord>>> remote_cache_;

  // Build-phase scratch, released by Finalize.
  std::unordered_map<VertexId, std::pair<VertexType, uint32_t>> pending_vertices_;
  std::unordered_map<VertexId, uint64_t> pending_degree_;
  std::vector<PendingEdge> pending_edges_;
};

}  // namespace shardgnn

#endif  // SHARDGNN_SHARDED_GRAPH_H_
