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

#include "shardgnn/sharded_graph.h"

#include <algorithm>
#include <cstring>

#include <fmt/format.h>

#include "shardgnn/random.h"

namespace shardgnn {
namespace {

uint64_t HashDouble(uint64_t h, double x) {
  uint64_t bits;
  std::memcpy(&bits, &x, sizeof(bits));
  return SplitMix64(h ^ bits);
}

}  // namespace

ShardedGraph::ShardedGraph(ShardId shard_id, size_t vertex_arity, size_t edge_arity,
                           ShardOptions options, OwnerFn owner)
    : shard_id_(shard_id),
      options_(options),
      owner_(std::move(owner)),
      attr_v_(vertex_arity, options.vertex_attr_cache),
      attr_e_(edge_arity, options.edge_attr_cache) {}

void ShardedGraph::AddVertex(VertexId v, VertexType type, std::span<const double> attr) {
  if (finalized_) throw Error(ErrorCode::kSchema, "shard already finalized");
  uint32_t idx = attr_v_.Intern(attr);
  auto [it, inserted] = pending_vertices_.try_emplace(v, type, idx);
  if (!inserted) {
    throw Error(ErrorCode::kSchema, fmt::format("vertex {} added twice", v));
  }
}

void ShardedGraph::AddEdge(VertexId src, VertexId dst, EdgeType type, double weight,
                           std::span<const double> attr) {
  if (finalized_) throw Error(ErrorCode::kSchema, "shard already finalized");
  if (!(weight >= 0.0)) {
    throw Error(ErrorCode::kSchema, fmt::format("negative weight on {}->{}", src, dst));
  }
  uint32_t attr_idx = attr_e_.Intern(attr);
  pending_edges_.push_back({src, {dst, type, weight, attr_idx, weight}});
}

void ShardedGraph::Reserve(size_t vertices, size_t edges) {
  pending_vertices_.reserve(vertices);
  pending_edges_.reserve(edges);
}

void ShardedGraph::SetDegree(VertexId v, uint64_t degree) {
  if (finalized_) {
    degree_[LocalIndex(v)] = degree;
  } else {
    pending_degree_[v] = degree;
  }
}

void ShardedGraph::SetDestinationTypes(EdgeType type, std::vector<VertexType> dst_types) {
  std::sort(dst_types.begin(), dst_types.end());
  dst_types_[type.code] = std::move(dst_types);
}

void ShardedGraph::Finalize() {
  if (finalized_) return;
  // Sources without a vertex record become owned with default type and
  // all-zero attributes.
  std::vector<double> zeros(attr_v_.arity(), 0.0);
  for (const auto& e : pending_edges_) {
    if (!pending_vertices_.count(e.src)) {
      pending_vertices_.try_emplace(e.src, VertexType{0}, attr_v_.Intern(zeros));
    }
  }
  owned_.reserve(pending_vertices_.size());
  for (const auto& [v, _] : pending_vertices_) owned_.push_back(v);
  std::sort(owned_.begin(), owned_.end());
  local_.reserve(owned_.size());
  vertex_type_.resize(owned_.size());
  vertex_attr_idx_.resize(owned_.size());
  degree_.assign(owned_.size(), 0);
  for (uint32_t i = 0; i < owned_.size(); ++i) {
    local_.emplace(owned_[i], i);
    const auto& [type, idx] = pending_vertices_.at(owned_[i]);
    vertex_type_[i] = type;
    vertex_attr_idx_[i] = idx;
  }
  for (const auto& [v, d] : pending_degree_) {
    auto it = local_.find(v);
    if (it != local_.end()) degree_[it->second] = d;
  }

  // Counting sort by source, then each list by (neighbor, type); equal keys
  // keep insertion order.
  offsets_.assign(owned_.size() + 1, 0);
  std::vector<uint32_t> src_index(pending_edges_.size());
  for (size_t k = 0; k < pending_edges_.size(); ++k) {
    src_index[k] = local_.at(pending_edges_[k].src);
    ++offsets_[src_index[k] + 1];
  }
  for (size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
  records_.resize(pending_edges_.size());
  {
    std::vector<uint64_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (size_t k = 0; k < pending_edges_.size(); ++k) {
      records_[cursor[src_index[k]]++] = pending_edges_[k].record;
    }
  }
  for (size_t i = 0; i + 1 < offsets_.size(); ++i) {
    std::stable_sort(records_.begin() + offsets_[i], records_.begin() + offsets_[i + 1],
                     [](const AdjacencyRecord& a, const AdjacencyRecord& b) {
                       if (a.neighbor != b.neighbor) return a.neighbor < b.neighbor;
                       return a.edge_type < b.edge_type;
                     });
  }

  pending_vertices_ = {};
  pending_degree_ = {};
  pending_edges_ = {};
  finalized_ = true;
}

void ShardedGraph::SetCachedHops(VertexId v,
                                 std::vector<std::vector<AdjacencyRecord>> hops) {
  if (Owns(v)) {
    throw Error(ErrorCode::kSchema,
                fmt::format("vertex {} is owned by shard {}; nothing to cache", v,
                            shard_id_));
  }
  remote_cache_[v] = std::move(hops);
}

void ShardedGraph::ClearRemoteCache() { remote_cache_.clear(); }

uint32_t ShardedGraph::LocalIndex(VertexId v) const {
  auto it = local_.find(v);
  if (it == local_.end()) throw NotLocalError(v, owner_(v));
  return it->second;
}

std::span<const AdjacencyRecord> ShardedGraph::OwnedNeighbors(VertexId v) const {
  uint32_t i = LocalIndex(v);
  return {records_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

std::span<AdjacencyRecord> ShardedGraph::MutableNeighbors(VertexId v) {
  uint32_t i = LocalIndex(v);
  return {records_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
}

std::vector<AdjacencyRecord> ShardedGraph::Neighbors(VertexId v,
                                                     std::optional<EdgeType> type) const {
  std::span<const AdjacencyRecord> source;
  if (auto it = local_.find(v); it != local_.end()) {
    source = {records_.data() + offsets_[it->second],
              offsets_[it->second + 1] - offsets_[it->second]};
  } else if (auto c = remote_cache_.find(v); c != remote_cache_.end()) {
    if (!c->second.empty()) source = c->second.front();
  } else {
    throw NotLocalError(v, owner_(v));
  }
  std::vector<AdjacencyRecord> out;
  out.reserve(source.size());
  for (const auto& r : source) {
    if (!type || Matches(*type, r.edge_type)) out.push_back(r);
  }
  return out;
}

const std::vector<std::vector<AdjacencyRecord>>* ShardedGraph::CachedHops(VertexId v) const {
  auto it = remote_cache_.find(v);
  return it == remote_cache_.end() ? nullptr : &it->second;
}

std::vector<VertexId> ShardedGraph::CachedVertices() const {
  std::vector<VertexId> out;
  out.reserve(remote_cache_.size());
  for (const auto& [v, _] : remote_cache_) out.push_back(v);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexId> ShardedGraph::ReferencedRemoteVertices() const {
  std::vector<VertexId> out;
  for (const auto& r : records_) {
    if (!local_.count(r.neighbor)) out.push_back(r.neighbor);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

VertexType ShardedGraph::vertex_type(VertexId v) const {
  return vertex_type_[LocalIndex(v)];
}

uint32_t ShardedGraph::vertex_attr_idx(VertexId v) const {
  return vertex_attr_idx_[LocalIndex(v)];
}

uint64_t ShardedGraph::degree(VertexId v) const { return degree_[LocalIndex(v)]; }

const std::vector<VertexType>* ShardedGraph::destination_types(EdgeType type) const {
  auto it = dst_types_.find(type.code);
  return it == dst_types_.end() ? nullptr : &it->second;
}

StorageReport ShardedGraph::Report() const {
  StorageReport r;
  r.n = owned_.size();
  r.records = records_.size();
  r.n_d = r.n ? static_cast<double>(r.records) / static_cast<double>(r.n) : 0.0;
  uint64_t v_bytes = attr_v_.arity() * sizeof(double);
  uint64_t e_bytes = attr_e_.arity() * sizeof(double);
  r.combined_bytes = r.records * e_bytes + r.n * v_bytes;
  r.separated_bytes = attr_v_.size() * v_bytes + attr_e_.size() * e_bytes +
                      kIndexBytes * (r.records + r.n);
  r.n_a = attr_v_.size() + attr_e_.size();
  if (r.n_a) {
    r.n_l = static_cast<double>(attr_v_.size() * attr_v_.arity() +
                                attr_e_.size() * attr_e_.arity()) /
            static_cast<double>(r.n_a);
  }
  return r;
}

uint64_t ShardedGraph::Digest() const {
  uint64_t h = SplitMix64(shard_id_);
  for (size_t i = 0; i < owned_.size(); ++i) {
    h = SplitMix64(h ^ owned_[i]);
    h = SplitMix64(h ^ vertex_type_[i].code);
    h = SplitMix64(h ^ degree_[i]);
    for (double x : attr_v_.Peek(vertex_attr_idx_[i])) h = HashDouble(h, x);
    for (uint64_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      const auto& rec = records_[k];
      h = SplitMix64(h ^ rec.neighbor);
      h = SplitMix64(h ^ rec.edge_type.code);
      h = HashDouble(h, rec.weight);
      h = HashDouble(h, rec.sampling_weight);
      for (double x : attr_e_.Peek(rec.edge_attr_idx)) h = HashDouble(h, x);
    }
  }
  return h;
}

}  // namespace shardgnn
