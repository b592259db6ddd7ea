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

#ifndef SHARDGNN_PARTITIONER_H_
#define SHARDGNN_PARTITIONER_H_

#include <istream>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "shardgnn/common.h"
#include "shardgnn/graph_data.h"
#include "shardgnn/sharded_graph.h"

namespace shardgnn {

enum class PartitionStrategy {
  kEdgeCutHash,
  kVertexCutGreedy,
  kGrid2d,
  kStreamingGreedy,
  kExternalFile,
};

std::string_view StrategyName(PartitionStrategy strategy);

struct PartitionPlan {
  ShardId shards = 1;
  PartitionStrategy strategy = PartitionStrategy::kEdgeCutHash;
  // Load penalty of the streaming strategy.
  double lambda = 1.0;
  // Vertex -> shard mapping for kExternalFile.
  std::unordered_map<VertexId, ShardId> external;

  // Parses `hash|vcut|grid2d|stream|file:<path>`; file plans are loaded.
  static PartitionPlan FromFlag(std::string_view flag, ShardId shards);

  // True when every edge lives on the shard of its source vertex.
  bool source_partitioned() const {
    return strategy == PartitionStrategy::kEdgeCutHash ||
           strategy == PartitionStrategy::kStreamingGreedy ||
           strategy == PartitionStrategy::kExternalFile;
  }
};

// TSV `vertex_id <TAB> shard_id`.
std::unordered_map<VertexId, ShardId> ReadPlanFile(std::istream& in, ShardId shards);

// Rows/columns of the worker grid used by kGrid2d; rows * cols == shards.
std::pair<ShardId, ShardId> GridShape(ShardId shards);

// Stateful edge -> shard assignment for one pass over a graph. Strategies
// that depend on graph structure (streaming, vertex cut) read it in Prepare;
// afterwards Assign must see the edges in stream order.
class EdgeAssigner {
 public:
  explicit EdgeAssigner(PartitionPlan plan);

  void Prepare(const GraphData& graph);
  ShardId Assign(VertexId src, VertexId dst);

  // Master shard of a vertex. For source-partitioned plans this is where
  // its adjacency lives.
  ShardId Owner(VertexId v) const;

  const PartitionPlan& plan() const { return plan_; }

 private:
  ShardId PlaceReplica(VertexId src, VertexId dst);

  PartitionPlan plan_;
  ShardId rows_ = 1;
  ShardId cols_ = 1;
  std::unordered_map<VertexId, ShardId> placed_;
  // Vertex-cut state.
  std::unordered_map<VertexId, uint64_t> replicas_;
  std::vector<uint64_t> edge_load_;
};

struct PartitionQuality {
  uint64_t total_edges = 0;
  uint64_t crossing_edges = 0;
  double balance = 1.0;
  double replication_factor = 1.0;
  std::vector<uint64_t> shard_edges;
};

struct PartitionResult {
  PartitionPlan plan;
  std::vector<ShardedGraph> shards;
  PartitionQuality quality;
  OwnerFn owner;
};

struct BuildOptions {
  ShardOptions shard;
  // Concurrent shard builders; 0 means one per shard.
  unsigned builders = 0;
};

// Assigns every edge to a shard and builds the shards concurrently.
PartitionResult Partition(const GraphData& graph, const PartitionPlan& plan,
                          const BuildOptions& options = {});

// Per-vertex counts of distinct vertices within k directed hops, k = 1..hops,
// in both directions.
class DegreeTable {
 public:
  DegreeTable() = default;
  DegreeTable(uint32_t hops, std::vector<VertexId> ids);

  uint32_t hops() const { return hops_; }
  const std::vector<VertexId>& ids() const { return ids_; }
  size_t size() const { return ids_.size(); }

  // Index of `v` in ids(); throws kLookup for unknown vertices.
  size_t IndexOf(VertexId v) const;
  uint32_t In(size_t index, uint32_t k) const { return d_in_[index * hops_ + k - 1]; }
  uint32_t Out(size_t index, uint32_t k) const { return d_out_[index * hops_ + k - 1]; }
  uint32_t& MutableIn(size_t index, uint32_t k) { return d_in_[index * hops_ + k - 1]; }
  uint32_t& MutableOut(size_t index, uint32_t k) { return d_out_[index * hops_ + k - 1]; }

 private:
  uint32_t hops_ = 0;
  std::vector<VertexId> ids_;
  std::vector<uint32_t> d_in_;
  std::vector<uint32_t> d_out_;
};

DegreeTable GlobalDegreePass(const GraphData& graph, uint32_t hops, unsigned threads = 0);

}  // namespace shardgnn

#endif  // SHARDGNN_PARTITIONER_H_
