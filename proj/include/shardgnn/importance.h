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

#ifndef SHARDGNN_IMPORTANCE_H_
#define SHARDGNN_IMPORTANCE_H_

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "shardgnn/partitioner.h"
#include "shardgnn/sharded_graph.h"

namespace shardgnn {

// Importance of a pure sink (no out-neighbors, some in-neighbors). Passes
// every finite threshold.
inline constexpr double kSinkImportance = std::numeric_limits<double>::infinity();

// d_in / d_out; kSinkImportance when only d_out is zero; 0 when both are.
double Importance(uint64_t d_in, uint64_t d_out);

struct ImportanceStats {
  VertexId v = 0;
  std::vector<uint32_t> d_in;   // index k-1 holds hop k
  std::vector<uint32_t> d_out;
  std::vector<double> imp;
};

// Importance for every vertex of a degree table, hops 1..h.
class ImportanceTable {
 public:
  explicit ImportanceTable(DegreeTable degrees);

  const DegreeTable& degrees() const { return degrees_; }
  uint32_t hops() const { return degrees_.hops(); }
  size_t size() const { return degrees_.size(); }
  VertexId id(size_t index) const { return degrees_.ids()[index]; }
  double Imp(size_t index, uint32_t k) const { return imp_[index * hops() + k - 1]; }
  // No edges in either direction.
  bool Isolated(size_t index) const {
    return degrees_.In(index, 1) == 0 && degrees_.Out(index, 1) == 0;
  }
  ImportanceStats Stats(VertexId v) const;

 private:
  DegreeTable degrees_;
  std::vector<double> imp_;
};

enum class CachePolicy { kImportance, kRandom, kLru };

std::string_view CachePolicyName(CachePolicy policy);
CachePolicy ParseCachePolicy(std::string_view name);

struct CachePolicyConfig {
  uint32_t h = 2;
  // Per-hop thresholds; empty means 0.2 at every hop.
  std::vector<double> tau;
  CachePolicy policy = CachePolicy::kImportance;
  uint64_t seed = 0;

  double Tau(uint32_t k) const { return tau.empty() ? 0.2 : tau.at(k - 1); }
};

// Vertices selected for replication. per_hop[k-1] is the sorted hop-k set;
// depth(v) is the largest k whose set holds v.
struct CacheSelection {
  std::vector<std::vector<VertexId>> per_hop;
  std::unordered_map<VertexId, uint32_t> depth;

  static CacheSelection FromSets(std::vector<std::vector<VertexId>> per_hop);
  // Distinct selected vertices.
  size_t size() const { return depth.size(); }
  uint32_t Depth(VertexId v) const {
    auto it = depth.find(v);
    return it == depth.end() ? 0 : it->second;
  }
};

CacheSelection SelectCacheSet(const ImportanceTable& table, const CachePolicyConfig& cfg);

// Fraction of non-isolated vertices whose hop-k importance is >= tau.
double CachedFraction(const ImportanceTable& table, uint32_t k, double tau);

struct MaterializeStats {
  uint64_t entries = 0;   // (shard, vertex) replicas
  uint64_t records = 0;   // adjacency records copied, all hops
};

// Copies the hop lists of selected vertices onto every shard that references
// them. Hop 1 is the owner's adjacency with edge attributes re-interned into
// the local index; hop j >= 2 holds the vertices at directed distance exactly
// j, with unit weight and no attribute. `max_depth` caps the stored hops.
// Shards must come from a source-partitioned plan.
MaterializeStats MaterializeCache(std::vector<ShardedGraph>& shards,
                                  const CacheSelection& selection,
                                  uint32_t max_depth = std::numeric_limits<uint32_t>::max());

// Same with a separate selection per shard; per_shard[s] applies to shard s.
MaterializeStats MaterializeCache(std::vector<ShardedGraph>& shards,
                                  std::span<const CacheSelection> per_shard,
                                  uint32_t max_depth = std::numeric_limits<uint32_t>::max());

// Hop lists for one vertex as MaterializeCache would store them, read from
// the owning shards.
std::vector<std::vector<AdjacencyRecord>> CollectHops(const std::vector<ShardedGraph>& shards,
                                                      VertexId v, uint32_t depth);

}  // namespace shardgnn

#endif  // SHARDGNN_IMPORTANCE_H_
