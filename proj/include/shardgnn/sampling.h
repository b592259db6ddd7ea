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

#ifndef SHARDGNN_SAMPLING_H_
#define SHARDGNN_SAMPLING_H_

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "shardgnn/common.h"
#include "shardgnn/sharded_graph.h"

namespace shardgnn {

enum class Provenance : uint8_t { kLocal, kCache, kRemote };

// One neighbor-draw job: `count` draws with replacement from the out-edges of
// `parent`, issued on behalf of shard `home`.
struct ExpandTask {
  VertexId parent = 0;
  uint32_t count = 1;
  uint64_t seed = 0;
  ShardId home = 0;
};

struct ExpandResult {
  std::vector<VertexId> ids;
  std::vector<double> weights;   // edge weight of each draw; 1 for padding
  Provenance provenance = Provenance::kLocal;
  bool padded = false;           // no matching edge; ids are all `parent`
};

// Draws `count` records among those matching `type`, with probability
// proportional to sampling_weight (uniform when all are zero). A vertex with
// no matching record yields itself `count` times.
ExpandResult SampleNeighbors(std::span<const AdjacencyRecord> records, EdgeType type,
                             VertexId parent, uint32_t count, uint64_t seed);

struct NeighborhoodResult {
  // ids[j][r * hop_nums[j] + i]: i-th hop-(j+1) context of root r.
  std::vector<std::vector<VertexId>> ids;
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<Provenance>> provenance;
  std::vector<std::vector<uint8_t>> padded;
};

struct WeightUpdate {
  VertexId v = 0;
  VertexId u = 0;
  double gradient = 0.0;
};

enum class UpdateMode { kSync, kAsync };

inline constexpr double kMinSamplingWeight = 1e-6;

struct SamplerOptions {
  // Vertex groups (buckets) per shard; 0 means one per available core.
  uint32_t buckets_per_shard = 0;
  size_t queue_capacity = size_t{1} << 16;
  bool pin_cores = false;
  double learning_rate = 0.01;
  // Runtime LRU of fetched remote adjacency, per bucket. Capacities come
  // from SeedLru; buckets without a seed entry cache nothing.
  bool lru = false;
};

struct ServiceStats {
  uint64_t local_tasks = 0;
  uint64_t cache_tasks = 0;
  uint64_t remote_tasks = 0;
  // Distinct (home bucket, vertex) pairs sent to an owner shard per round.
  uint64_t remote_fetches = 0;
  uint64_t update_rejects = 0;
};

class Bucket;

// Request front end over a set of shards. Each shard's owned vertex ids are
// split into contiguous groups; every group has one bounded lock-free queue
// and one consumer thread, which is the only code that reads or writes the
// adjacency of that group. Clients never touch shard data directly: every
// operation is a message to a bucket, answered through a future.
//
// Shards must come from a source-partitioned plan and must outlive the
// service; they must not be modified elsewhere while it runs.
class GraphService {
 public:
  GraphService(std::vector<ShardedGraph>& shards, SamplerOptions options = {});
  ~GraphService();

  GraphService(const GraphService&) = delete;
  GraphService& operator=(const GraphService&) = delete;

  // Pre-populates the LRU of the buckets of `shard` with the adjacency of
  // `vertices`; each bucket's capacity becomes the number of vertices routed
  // to it. Call before the first request.
  void SeedLru(ShardId shard, std::span<const VertexId> vertices);

  ShardId num_shards() const { return static_cast<ShardId>(shards_.size()); }
  uint32_t buckets_per_shard() const { return groups_; }
  ShardId OwnerOf(VertexId v) const;
  // Group of `v` within `shard`.
  uint32_t Route(ShardId shard, VertexId v) const;
  uint32_t BucketIndex(ShardId shard, VertexId v) const { return shard * groups_ + Route(shard, v); }

  // Uniform draws with replacement from the shard's vertices having at least
  // one out-edge of `type`. Throws kEmptyDomain.
  std::vector<VertexId> TraverseSample(ShardId shard, EdgeType type, size_t batch_size,
                                       uint64_t seed);
  // Same, over the union of all shards.
  std::vector<VertexId> TraverseSampleGlobal(EdgeType type, size_t batch_size, uint64_t seed);

  // Runs tasks; results are aligned with `tasks`.
  std::vector<ExpandResult> Expand(std::span<const ExpandTask> tasks, EdgeType type);

  // Multi-hop contexts. Each root is served by its owning shard; hop j holds
  // exactly hop_nums[j] entries per root, entry i drawn from the neighbors
  // of hop-(j-1) entry (i mod hop_nums[j-1]).
  NeighborhoodResult NeighborhoodSample(std::span<const VertexId> vertices, EdgeType type,
                                        std::span<const uint32_t> hop_nums, uint64_t seed);

  // neg_num draws per vertex, flattened vertex-major. Throws
  // kCandidateExhausted when no shard has a candidate.
  std::vector<VertexId> NegativeSample(std::span<const VertexId> vertices, EdgeType type,
                                       uint32_t neg_num, uint64_t seed);

  // Returns the number of updates applied (sync) or 0 (async).
  uint64_t UpdateWeights(std::span<const WeightUpdate> updates, EdgeType type, UpdateMode mode);
  // Waits until every message posted so far has been processed.
  void Flush();

  // Owner-side copy of the out-edges of `v`.
  std::vector<AdjacencyRecord> FetchNeighbors(VertexId v);
  // Vertex attribute vectors through the owners' attribute caches.
  std::vector<std::vector<double>> FetchAttributes(std::span<const VertexId> vertices);
  // Global total degree of owned vertices, as recorded at build time.
  std::vector<uint64_t> FetchDegrees(std::span<const VertexId> vertices);

  ServiceStats stats() const;
  void ResetStats();

 private:
  friend class Bucket;

  struct Table {
    std::vector<VertexId> ids;
    std::vector<double> prefix;  // cumulative weights, empty for uniform tables
  };
  std::shared_ptr<const Table> EligibleSources(ShardId shard, EdgeType type);
  std::shared_ptr<const Table> NegativeCandidates(ShardId shard, EdgeType type);

  Bucket& bucket(ShardId shard, uint32_t group) { return *buckets_[shard * groups_ + group]; }

  std::vector<ShardedGraph>& shards_;
  SamplerOptions options_;
  uint32_t groups_ = 1;
  std::vector<std::vector<VertexId>> bounds_;  // per shard, first id of groups 1..G-1
  std::vector<std::unique_ptr<Bucket>> buckets_;

  std::mutex tables_mu_;
  std::unordered_map<uint64_t, std::shared_ptr<const Table>> tables_;

  std::atomic<uint64_t> local_tasks_{0};
  std::atomic<uint64_t> cache_tasks_{0};
  std::atomic<uint64_t> remote_tasks_{0};
  std::atomic<uint64_t> remote_fetches_{0};
  std::atomic<uint64_t> update_rejects_{0};
};

}  // namespace shardgnn

#endif  // SHARDGNN_SAMPLING_H_
