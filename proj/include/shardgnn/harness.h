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

#ifndef SHARDGNN_HARNESS_H_
#define SHARDGNN_HARNESS_H_

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "shardgnn/gnn.h"
#include "shardgnn/importance.h"
#include "shardgnn/partitioner.h"
#include "shardgnn/power_law.h"

namespace shardgnn {

// Benchmarks behind the CLI. Every function is deterministic in its seed
// except for the wall-clock columns.

struct BuildRun {
  PartitionResult result;
  double seconds = 0.0;
};

BuildRun TimedBuild(const GraphData& graph, const PartitionPlan& plan, unsigned builders);

// Every input edge is stored on some shard (exactly once for source-partitioned
// plans) and every vertex is owned exactly once. Returns an empty string or
// the first violation.
std::string CheckConservation(const GraphData& graph, const PartitionResult& built);

// Fraction of non-isolated vertices selected at any hop 1..h with every
// threshold equal to tau.
double UnionCachedFraction(const ImportanceTable& table, uint32_t h, double tau);

struct CacheSweepRow {
  double tau = 0.0;
  // Fraction of non-isolated vertices whose hop-h lists pass tau.
  double cached_fraction = 0.0;
  std::vector<double> per_hop;  // same at every hop k = 1..h
};

std::vector<CacheSweepRow> CacheSweep(const ImportanceTable& table, uint32_t h,
                                      const std::vector<double>& taus);

// Parses `start:stop:step`, inclusive of stop up to rounding.
std::vector<double> ParseSweep(const std::string& text);

// Top `budget` non-isolated vertices by max_k Imp^(k) / tau_k (ties by id).
// With budget equal to the threshold set size this is the threshold set.
CacheSelection SelectTopImportance(const ImportanceTable& table, const CachePolicyConfig& cfg,
                                   size_t budget);

struct CacheBenchConfig {
  ShardId shards = 4;
  uint32_t hops = 2;
  std::vector<uint32_t> hop_nums{10, 5};
  double tau = 0.2;
  // Distinct cached vertices as a fraction of non-isolated vertices; negative
  // means the importance threshold set size at tau.
  double budget = -1.0;
  size_t batch = 512;
  size_t rounds = 20;
  uint32_t buckets_per_shard = 1;
  uint64_t seed = 0;
};

struct CacheBenchRow {
  CachePolicy policy = CachePolicy::kImportance;
  uint64_t cached_entries = 0;  // (shard, vertex) replicas held before the run
  uint64_t remote_fetches = 0;
  uint64_t remote_tasks = 0;
  uint64_t cache_tasks = 0;
  uint64_t local_tasks = 0;
  double seconds = 0.0;
  double p50_ms = 0.0;
  double p90_ms = 0.0;
  double p99_ms = 0.0;
};

// Replays one seeded neighborhood workload under each policy. Every policy
// holds the same number of replicas on every shard; violating that throws.
std::vector<CacheBenchRow> BenchCache(const GraphData& graph, const ImportanceTable& table,
                                      const CacheBenchConfig& cfg);

enum class SamplerKind { kTraverse, kNeighborhood, kNegative };
SamplerKind ParseSamplerKind(std::string_view name);
std::string_view SamplerKindName(SamplerKind kind);

struct SampleBenchConfig {
  SamplerKind kind = SamplerKind::kNeighborhood;
  size_t batch = 512;
  std::vector<uint32_t> hop_nums{2, 2};
  uint32_t neg = 5;
  size_t iters = 100;
  ShardId shards = 4;
  double tau = 0.2;
  uint32_t buckets_per_shard = 0;
  uint64_t seed = 0;
};

struct LatencySummary {
  size_t calls = 0;
  double mean_ms = 0.0;
  double p50_ms = 0.0;
  double p90_ms = 0.0;
  double p99_ms = 0.0;
  double max_ms = 0.0;
  uint64_t digest = 0;  // over all sampled ids
};

LatencySummary Summarize(std::vector<double> ms);

LatencySummary BenchSampler(const GraphData& graph, const SampleBenchConfig& cfg);

struct OpBenchConfig {
  bool memoize = true;
  size_t batch = 512;
  uint32_t hops = 2;
  std::vector<uint32_t> hop_nums{10, 10};
  size_t dim = 16;
  size_t iters = 5;
  ShardId shards = 1;
  uint64_t seed = 0;
};

struct OpBenchResult {
  double seconds_per_batch = 0.0;
  uint64_t computed = 0;
  uint64_t reused = 0;
  uint64_t aggregate_evals = 0;
  uint64_t distinct_pairs = 0;  // distinct (v, k), k >= 1, the batch depends on
  uint64_t output_digest = 0;   // bit pattern hash of the outputs
};

OpBenchResult BenchOperators(const GraphData& graph, const OpBenchConfig& cfg);

// Hash of the exact bit patterns of a set of vectors.
uint64_t VectorDigest(const std::vector<Vector>& vectors);

// Minimal CSV table: header plus rows of already formatted cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  size_t Column(const std::string& name) const;  // throws kSchema
};

CsvTable ReadCsv(std::istream& in);
void WriteCsv(const CsvTable& table, std::ostream& out);

// Human-readable summary of one bench CSV: aligned table followed by any
// verdict or derived column the schema supports. With `markdown` the table
// is a markdown table.
std::string ReportCsv(const CsvTable& table, bool markdown = false);

// `key=value` lines; '#' starts a comment.
std::map<std::string, std::string> ReadConfigFile(const std::string& path);

std::string Sha256File(const std::string& path);

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::map<std::string, uint64_t> seeds;
  std::vector<std::string> inputs;
  std::map<std::string, double> timings;
  std::vector<std::string> outputs;

  // Hashes inputs and outputs now; both must exist.
  void Write(const std::string& path) const;
};

}  // namespace shardgnn

#endif  // SHARDGNN_HARNESS_H_
