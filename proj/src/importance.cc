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

#include "shardgnn/importance.h"

#include <algorithm>

#include <fmt/format.h>

#include "shardgnn/random.h"

namespace shardgnn {

double Importance(uint64_t d_in, uint64_t d_out) {
  if (d_out > 0) return static_cast<double>(d_in) / static_cast<double>(d_out);
  return d_in > 0 ? kSinkImportance : 0.0;
}

ImportanceTable::ImportanceTable(DegreeTable degrees) : degrees_(std::move(degrees)) {
  const uint32_t h = degrees_.hops();
  imp_.resize(degrees_.size() * h);
  for (size_t i = 0; i < degrees_.size(); ++i) {
    for (uint32_t k = 1; k <= h; ++k) {
      imp_[i * h + k - 1] = Importance(degrees_.In(i, k), degrees_.Out(i, k));
    }
  }
}

ImportanceStats ImportanceTable::Stats(VertexId v) const {
  size_t i = degrees_.IndexOf(v);
  ImportanceStats s;
  s.v = v;
  for (uint32_t k = 1; k <= hops(); ++k) {
    s.d_in.push_back(degrees_.In(i, k));
    s.d_out.push_back(degrees_.Out(i, k));
    s.imp.push_back(Imp(i, k));
  }
  return s;
}

std::string_view CachePolicyName(CachePolicy policy) {
  switch (policy) {
    case CachePolicy::kImportance: return "importance";
    case CachePolicy::kRandom: return "random";
    case CachePolicy::kLru: return "lru";
  }
  return "unknown";
}

CachePolicy ParseCachePolicy(std::string_view name) {
  if (name == "importance") return CachePolicy::kImportance;
  if (name == "random") return CachePolicy::kRandom;
  if (name == "lru") return CachePolicy::kLru;
  throw Error(ErrorCode::kUsage, fmt::format("unknown cache policy '{}'", name));
}

CacheSelection CacheSelection::FromSets(std::vector<std::vector<VertexId>> per_hop) {
  CacheSelection s;
  s.per_hop = std::move(per_hop);
  for (uint32_t k = 1; k <= s.per_hop.size(); ++k) {
    auto& set = s.per_hop[k - 1];
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    for (VertexId v : set) {
      auto& d = s.depth[v];
      d = std::max(d, k);
    }
  }
  return s;
}

CacheSelection SelectCacheSet(const ImportanceTable& table, const CachePolicyConfig& cfg) {
  if (cfg.h == 0 || cfg.h > table.hops()) {
    throw Error(ErrorCode::kUsage,
                fmt::format("cache depth {} outside 1..{}", cfg.h, table.hops()));
  }
  if (!cfg.tau.empty() && cfg.tau.size() != cfg.h) {
    throw Error(ErrorCode::kUsage, "need one threshold per hop");
  }
  std::vector<std::vector<VertexId>> sets(cfg.h);
  if (cfg.policy == CachePolicy::kLru) return CacheSelection::FromSets(std::move(sets));

  std::vector<VertexId> eligible;
  for (size_t i = 0; i < table.size(); ++i) {
    if (!table.Isolated(i)) eligible.push_back(table.id(i));
  }
  for (uint32_t k = 1; k <= cfg.h; ++k) {
    double tau = cfg.Tau(k);
    if (tau < 0) throw Error(ErrorCode::kUsage, "thresholds must be >= 0");
    for (size_t i = 0; i < table.size(); ++i) {
      if (!table.Isolated(i) && table.Imp(i, k) >= tau) sets[k - 1].push_back(table.id(i));
    }
    if (cfg.policy == CachePolicy::kRandom) {
      // Same size, uniformly chosen among non-isolated vertices.
      size_t want = sets[k - 1].size();
      std::vector<VertexId> pool = eligible;
      Rng rng(MixSeed({cfg.seed, k, 0x7261ULL}));
      for (size_t j = 0; j < want; ++j) {
        std::swap(pool[j], pool[j + rng.Below(pool.size() - j)]);
      }
      pool.resize(want);
      sets[k - 1] = std::move(pool);
    }
  }
  return CacheSelection::FromSets(std::move(sets));
}

double CachedFraction(const ImportanceTable& table, uint32_t k, double tau) {
  uint64_t selected = 0;
  uint64_t eligible = 0;
  for (size_t i = 0; i < table.size(); ++i) {
    if (table.Isolated(i)) continue;
    ++eligible;
    if (table.Imp(i, k) >= tau) ++selected;
  }
  return eligible ? static_cast<double>(selected) / static_cast<double>(eligible) : 0.0;
}

std::vector<std::vector<AdjacencyRecord>> CollectHops(const std::vector<ShardedGraph>& shards,
                                                      VertexId v, uint32_t depth) {
  std::vector<std::vector<AdjacencyRecord>> hops;
  if (depth == 0 || shards.empty()) return hops;
  auto adjacency = [&](VertexId u) -> std::span<const AdjacencyRecord> {
    const auto& owner = shards.at(shards.front().OwnerOf(u));
    if (!owner.Owns(u)) return {};
    return owner.OwnedNeighbors(u);
  };
  auto first = adjacency(v);
  hops.emplace_back(first.begin(), first.end());

  std::unordered_map<VertexId, bool> seen{{v, true}};
  std::vector<VertexId> frontier;
  for (const auto& r : first) {
    if (seen.try_emplace(r.neighbor, true).second) frontier.push_back(r.neighbor);
  }
  for (uint32_t j = 2; j <= depth; ++j) {
    std::vector<VertexId> next;
    for (VertexId u : frontier) {
      for (const auto& r : adjacency(u)) {
        if (seen.try_emplace(r.neighbor, true).second) next.push_back(r.neighbor);
      }
    }
    std::sort(next.begin(), next.end());
    std::vector<AdjacencyRecord> level;
    level.reserve(next.size());
    for (VertexId w : next) level.push_back({w, kAnyEdgeType, 1.0, kNoAttribute, 1.0});
    hops.push_back(std::move(level));
    frontier = std::move(next);
  }
  return hops;
}

namespace {

template <typename DepthFn>
MaterializeStats Materialize(std::vector<ShardedGraph>& shards, DepthFn depth_of,
                             uint32_t max_depth) {
  MaterializeStats stats;
  std::unordered_map<VertexId, std::vector<std::vector<AdjacencyRecord>>> memo;
  for (size_t s = 0; s < shards.size(); ++s) {
    auto& shard = shards[s];
    for (VertexId v : shard.ReferencedRemoteVertices()) {
      uint32_t depth = std::min(depth_of(s, v), max_depth);
      if (depth == 0) continue;
      auto it = memo.find(v);
      if (it == memo.end() || it->second.size() < depth) {
        it = memo.insert_or_assign(v, CollectHops(shards, v, depth)).first;
      }
      std::vector<std::vector<AdjacencyRecord>> hops(it->second.begin(),
                                                     it->second.begin() + depth);
      const auto& owner = shards.at(shard.OwnerOf(v));
      for (auto& r : hops.front()) {
        r.edge_attr_idx =
            shard.edge_attributes().Intern(owner.edge_attributes().Peek(r.edge_attr_idx));
      }
      for (const auto& level : hops) stats.records += level.size();
      ++stats.entries;
      shard.SetCachedHops(v, std::move(hops));
    }
  }
  return stats;
}

}  // namespace

MaterializeStats MaterializeCache(std::vector<ShardedGraph>& shards,
                                  const CacheSelection& selection, uint32_t max_depth) {
  return Materialize(
      shards, [&](size_t, VertexId v) { return selection.Depth(v); }, max_depth);
}

MaterializeStats MaterializeCache(std::vector<ShardedGraph>& shards,
                                  std::span<const CacheSelection> per_shard,
                                  uint32_t max_depth) {
  if (per_shard.size() != shards.size()) {
    throw Error(ErrorCode::kUsage, "one selection per shard required");
  }
  return Materialize(
      shards, [&](size_t s, VertexId v) { return per_shard[s].Depth(v); }, max_depth);
}

}  // namespace shardgnn
