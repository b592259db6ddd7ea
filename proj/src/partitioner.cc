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

#include "shardgnn/partitioner.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <memory>
#include <thread>

#include <fmt/format.h>

#include "shardgnn/random.h"

namespace shardgnn {

std::string_view StrategyName(PartitionStrategy strategy) {
  switch (strategy) {
    case PartitionStrategy::kEdgeCutHash: return "hash";
    case PartitionStrategy::kVertexCutGreedy: return "vcut";
    case PartitionStrategy::kGrid2d: return "grid2d";
    case PartitionStrategy::kStreamingGreedy: return "stream";
    case PartitionStrategy::kExternalFile: return "file";
  }
  return "unknown";
}

PartitionPlan PartitionPlan::FromFlag(std::string_view flag, ShardId shards) {
  if (shards == 0) throw Error(ErrorCode::kUsage, "--shards must be >= 1");
  PartitionPlan plan;
  plan.shards = shards;
  if (flag == "hash") {
    plan.strategy = PartitionStrategy::kEdgeCutHash;
  } else if (flag == "vcut") {
    plan.strategy = PartitionStrategy::kVertexCutGreedy;
  } else if (flag == "grid2d") {
    plan.strategy = PartitionStrategy::kGrid2d;
  } else if (flag == "stream") {
    plan.strategy = PartitionStrategy::kStreamingGreedy;
  } else if (flag.starts_with("file:")) {
    plan.strategy = PartitionStrategy::kExternalFile;
    std::string path(flag.substr(5));
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::kIo, "cannot open plan file " + path);
    plan.external = ReadPlanFile(in, shards);
  } else {
    throw Error(ErrorCode::kUsage, fmt::format("unknown partition strategy '{}'", flag));
  }
  return plan;
}

std::unordered_map<VertexId, ShardId> ReadPlanFile(std::istream& in, ShardId shards) {
  std::unordered_map<VertexId, ShardId> out;
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::kParse, fmt::format("plan line {}: expected 2 fields", number));
    }
    try {
      size_t used = 0;
      VertexId v = std::stoull(line.substr(0, tab), &used);
      if (used != tab) throw std::invalid_argument("trailing");
      auto rest = line.substr(tab + 1);
      ShardId s = static_cast<ShardId>(std::stoul(rest, &used));
      if (used != rest.size()) throw std::invalid_argument("trailing");
      if (s >= shards) {
        throw Error(ErrorCode::kParse,
                    fmt::format("plan line {}: shard {} >= {}", number, s, shards));
      }
      out[v] = s;
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kParse, fmt::format("plan line {}: malformed", number));
    }
  }
  return out;
}

std::pair<ShardId, ShardId> GridShape(ShardId shards) {
  ShardId rows = 1;
  for (ShardId r = 1; r * r <= shards; ++r) {
    if (shards % r == 0) rows = r;
  }
  return {rows, shards / rows};
}

EdgeAssigner::EdgeAssigner(PartitionPlan plan) : plan_(std::move(plan)) {
  if (plan_.shards == 0) throw Error(ErrorCode::kUsage, "plan needs >= 1 shard");
  std::tie(rows_, cols_) = GridShape(plan_.shards);
  if (plan_.strategy == PartitionStrategy::kVertexCutGreedy && plan_.shards > 64) {
    throw Error(ErrorCode::kUsage, "vertex-cut greedy supports at most 64 shards");
  }
  edge_load_.assign(plan_.shards, 0);
}

void EdgeAssigner::Prepare(const GraphData& graph) {
  switch (plan_.strategy) {
    case PartitionStrategy::kEdgeCutHash:
    case PartitionStrategy::kGrid2d:
      return;
    case PartitionStrategy::kVertexCutGreedy:
      placed_.clear();
      replicas_.clear();
      edge_load_.assign(plan_.shards, 0);
      return;
    case PartitionStrategy::kExternalFile:
      for (VertexId v : graph.AllVertexIds()) {
        if (!plan_.external.count(v)) {
          throw Error(ErrorCode::kUnmappedVertex,
                      fmt::format("vertex {} is missing from the plan file", v));
        }
      }
      return;
    case PartitionStrategy::kStreamingGreedy:
      break;
  }

  // Vertex stream in order of first appearance; each vertex arrives with its
  // full (undirected, multi-edge) neighbor list and is placed on the shard
  // minimizing crossing edges to already-placed neighbors plus a load term.
  std::unordered_map<VertexId, uint32_t> index;
  std::vector<VertexId> order;
  auto visit = [&](VertexId v) {
    if (index.try_emplace(v, static_cast<uint32_t>(order.size())).second) {
      order.push_back(v);
    }
  };
  for (const auto& e : graph.edges()) {
    visit(e.src);
    visit(e.dst);
  }
  for (const auto& v : graph.vertices()) visit(v.id);

  const size_t n = order.size();
  std::vector<uint64_t> offsets(n + 1, 0);
  for (const auto& e : graph.edges()) {
    if (e.src == e.dst) continue;
    ++offsets[index[e.src] + 1];
    ++offsets[index[e.dst] + 1];
  }
  for (size_t i = 1; i <= n; ++i) offsets[i] += offsets[i - 1];
  std::vector<uint32_t> adj(offsets[n]);
  std::vector<uint64_t> fill(offsets.begin(), offsets.end() - 1);
  for (const auto& e : graph.edges()) {
    if (e.src == e.dst) continue;
    uint32_t a = index[e.src];
    uint32_t b = index[e.dst];
    adj[fill[a]++] = b;
    adj[fill[b]++] = a;
  }

  const ShardId p = plan_.shards;
  std::vector<int32_t> shard_of(n, -1);
  std::vector<uint64_t> load(p, 0);
  std::vector<uint64_t> counts(p, 0);
  placed_.clear();
  placed_.reserve(n);
  for (size_t x = 0; x < n; ++x) {
    std::fill(counts.begin(), counts.end(), 0);
    uint64_t placed_neighbors = 0;
    for (uint64_t k = offsets[x]; k < offsets[x + 1]; ++k) {
      int32_t s = shard_of[adj[k]];
      if (s >= 0) {
        ++counts[s];
        ++placed_neighbors;
      }
    }
    double mean_load = static_cast<double>(x) / p;
    ShardId best = 0;
    double best_cost = 0.0;
    for (ShardId s = 0; s < p; ++s) {
      double cost = static_cast<double>(placed_neighbors - counts[s]) +
                    plan_.lambda * static_cast<double>(load[s]) / (mean_load + 1.0);
      if (s == 0 || cost < best_cost) {
        best = s;
        best_cost = cost;
      }
    }
    shard_of[x] = static_cast<int32_t>(best);
    ++load[best];
    placed_.emplace(order[x], best);
  }
}

ShardId EdgeAssigner::PlaceReplica(VertexId src, VertexId dst) {
  uint64_t a = replicas_[src];
  uint64_t b = replicas_[dst];
  uint64_t candidates;
  if (a & b) {
    candidates = a & b;
  } else if (a && b) {
    candidates = a | b;
  } else if (a || b) {
    candidates = a | b;
  } else {
    candidates = plan_.shards == 64 ? ~0ULL : ((1ULL << plan_.shards) - 1);
  }
  ShardId best = 0;
  bool found = false;
  for (ShardId s = 0; s < plan_.shards; ++s) {
    if (!(candidates >> s & 1ULL)) continue;
    if (!found || edge_load_[s] < edge_load_[best]) {
      best = s;
      found = true;
    }
  }
  replicas_[src] |= 1ULL << best;
  replicas_[dst] |= 1ULL << best;
  placed_.try_emplace(src, best);
  placed_.try_emplace(dst, best);
  ++edge_load_[best];
  return best;
}

ShardId EdgeAssigner::Assign(VertexId src, VertexId dst) {
  switch (plan_.strategy) {
    case PartitionStrategy::kGrid2d: {
      uint64_t hs = StableHash(src);
      uint64_t hd = StableHash(dst);
      return static_cast<ShardId>((hs % rows_) * cols_ + hd % cols_);
    }
    case PartitionStrategy::kVertexCutGreedy:
      return PlaceReplica(src, dst);
    default:
      return Owner(src);
  }
}

ShardId EdgeAssigner::Owner(VertexId v) const {
  uint64_t h = StableHash(v);
  switch (plan_.strategy) {
    case PartitionStrategy::kEdgeCutHash:
      return static_cast<ShardId>(h % plan_.shards);
    case PartitionStrategy::kGrid2d:
      return static_cast<ShardId>((h % rows_) * cols_ + h % cols_);
    case PartitionStrategy::kExternalFile: {
      auto it = plan_.external.find(v);
      if (it == plan_.external.end()) {
        throw Error(ErrorCode::kUnmappedVertex,
                    fmt::format("vertex {} is missing from the plan file", v));
      }
      return it->second;
    }
    case PartitionStrategy::kStreamingGreedy:
    case PartitionStrategy::kVertexCutGreedy: {
      auto it = placed_.find(v);
      return it == placed_.end() ? static_cast<ShardId>(h % plan_.shards) : it->second;
    }
  }
  return 0;
}

PartitionResult Partition(const GraphData& graph, const PartitionPlan& plan,
                          const BuildOptions& options) {
  auto assigner = std::make_shared<EdgeAssigner>(plan);
  assigner->Prepare(graph);
  const ShardId p = plan.shards;
  const auto& edges = graph.edges();

  std::vector<std::vector<uint32_t>> shard_edges(p);
  for (auto& list : shard_edges) list.reserve(edges.size() / p + 1);
  for (size_t i = 0; i < edges.size(); ++i) {
    shard_edges[assigner->Assign(edges[i].src, edges[i].dst)].push_back(
        static_cast<uint32_t>(i));
  }

  // Global vertex facts: declared record, total degree, destination types.
  std::unordered_map<VertexId, uint32_t> declared;
  declared.reserve(graph.vertices().size());
  for (size_t i = 0; i < graph.vertices().size(); ++i) {
    if (!declared.try_emplace(graph.vertices()[i].id, static_cast<uint32_t>(i)).second) {
      throw Error(ErrorCode::kSchema,
                  fmt::format("vertex {} declared twice", graph.vertices()[i].id));
    }
  }
  auto type_of = [&](VertexId v) {
    auto it = declared.find(v);
    return it == declared.end() ? VertexType{0} : graph.vertices()[it->second].type;
  };
  std::unordered_map<VertexId, uint64_t> degree;
  degree.reserve(declared.size() + edges.size() / 2);
  std::vector<std::vector<VertexType>> dst_types(graph.edge_types().size());
  for (const auto& e : edges) {
    ++degree[e.src];
    ++degree[e.dst];
    if (e.type.code >= dst_types.size()) dst_types.resize(e.type.code + 1);
    auto t = type_of(e.dst);
    auto& list = dst_types[e.type.code];
    if (std::find(list.begin(), list.end(), t) == list.end()) list.push_back(t);
  }
  for (const auto& v : graph.vertices()) degree.try_emplace(v.id, 0);

  std::vector<std::vector<VertexId>> shard_vertices(p);
  for (const auto& [v, _] : degree) shard_vertices[assigner->Owner(v)].push_back(v);

  OwnerFn owner = [assigner](VertexId v) { return assigner->Owner(v); };
  const bool replicate_sources = !plan.source_partitioned();
  std::vector<double> zeros(graph.vertex_arity(), 0.0);

  std::vector<std::unique_ptr<ShardedGraph>> built(p);
  auto build_one = [&](ShardId s) {
    auto g = std::make_unique<ShardedGraph>(s, graph.vertex_arity(), graph.edge_arity(),
                                            options.shard, owner);
    auto& vertices = shard_vertices[s];
    if (replicate_sources) {
      for (uint32_t i : shard_edges[s]) vertices.push_back(edges[i].src);
    }
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    g->Reserve(vertices.size(), shard_edges[s].size());
    for (VertexId v : vertices) {
      auto it = declared.find(v);
      if (it == declared.end()) {
        g->AddVertex(v, VertexType{0}, zeros);
      } else {
        g->AddVertex(v, graph.vertices()[it->second].type, graph.vertex_attr(it->second));
      }
      g->SetDegree(v, degree.at(v));
    }
    for (uint32_t i : shard_edges[s]) {
      const auto& e = edges[i];
      g->AddEdge(e.src, e.dst, e.type, e.weight, graph.edge_attr(i));
    }
    for (size_t t = 0; t < dst_types.size(); ++t) {
      if (!dst_types[t].empty()) {
        g->SetDestinationTypes(EdgeType{static_cast<uint16_t>(t)}, dst_types[t]);
      }
    }
    g->Finalize();
    built[s] = std::move(g);
  };

  unsigned builders = options.builders ? options.builders : p;
  builders = std::min<unsigned>(builders, p);
  if (builders <= 1) {
    for (ShardId s = 0; s < p; ++s) build_one(s);
  } else {
    std::vector<std::exception_ptr> errors(builders);
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < builders; ++t) {
      threads.emplace_back([&, t] {
        try {
          for (ShardId s = t; s < p; s += builders) build_one(s);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : threads) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  PartitionResult result;
  result.plan = plan;
  result.owner = owner;
  result.shards.reserve(p);
  for (auto& g : built) result.shards.push_back(std::move(*g));

  auto& q = result.quality;
  q.total_edges = edges.size();
  q.shard_edges.resize(p);
  uint64_t present = 0;
  for (ShardId s = 0; s < p; ++s) {
    q.shard_edges[s] = shard_edges[s].size();
    present += result.shards[s].owned_vertices().size();
  }
  for (const auto& e : edges) {
    if (assigner->Owner(e.src) != assigner->Owner(e.dst)) ++q.crossing_edges;
  }
  if (!edges.empty()) {
    double mean = static_cast<double>(edges.size()) / p;
    double max = static_cast<double>(*std::max_element(q.shard_edges.begin(),
                                                       q.shard_edges.end()));
    q.balance = max / mean;
  }
  if (!degree.empty()) {
    q.replication_factor = static_cast<double>(present) / static_cast<double>(degree.size());
  }
  return result;
}

DegreeTable::DegreeTable(uint32_t hops, std::vector<VertexId> ids)
    : hops_(hops),
      ids_(std::move(ids)),
      d_in_(ids_.size() * hops, 0),
      d_out_(ids_.size() * hops, 0) {}

size_t DegreeTable::IndexOf(VertexId v) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
  if (it == ids_.end() || *it != v) {
    throw Error(ErrorCode::kLookup, fmt::format("vertex {} not in degree table", v));
  }
  return static_cast<size_t>(it - ids_.begin());
}

namespace {

struct Csr {
  std::vector<uint64_t> offsets;
  std::vector<uint32_t> targets;
};

Csr BuildCsr(size_t n, const std::vector<std::pair<uint32_t, uint32_t>>& pairs) {
  Csr csr;
  csr.offsets.assign(n + 1, 0);
  for (const auto& [a, _] : pairs) ++csr.offsets[a + 1];
  for (size_t i = 1; i <= n; ++i) csr.offsets[i] += csr.offsets[i - 1];
  csr.targets.resize(pairs.size());
  std::vector<uint64_t> fill(csr.offsets.begin(), csr.offsets.end() - 1);
  for (const auto& [a, b] : pairs) csr.targets[fill[a]++] = b;
  return csr;
}

// Writes counts[k-1] = |{w != source : dist(source, w) <= k}| for k = 1..hops.
void BoundedBfs(const Csr& csr, uint32_t source, uint32_t hops, uint32_t stamp,
                std::vector<uint32_t>& seen, std::vector<uint32_t>& frontier,
                std::vector<uint32_t>& next, uint32_t* counts) {
  frontier.clear();
  frontier.push_back(source);
  seen[source] = stamp;
  uint32_t total = 0;
  for (uint32_t k = 1; k <= hops; ++k) {
    next.clear();
    for (uint32_t u : frontier) {
      for (uint64_t e = csr.offsets[u]; e < csr.offsets[u + 1]; ++e) {
        uint32_t w = csr.targets[e];
        if (seen[w] != stamp) {
          seen[w] = stamp;
          next.push_back(w);
        }
      }
    }
    total += static_cast<uint32_t>(next.size());
    counts[k - 1] = total;
    frontier.swap(next);
  }
}

}  // namespace

DegreeTable GlobalDegreePass(const GraphData& graph, uint32_t hops, unsigned threads) {
  if (hops == 0) throw Error(ErrorCode::kUsage, "hop count must be >= 1");
  DegreeTable table(hops, graph.AllVertexIds());
  const auto& ids = table.ids();
  const size_t n = ids.size();
  auto index = [&](VertexId v) {
    return static_cast<uint32_t>(std::lower_bound(ids.begin(), ids.end(), v) - ids.begin());
  };
  std::vector<std::pair<uint32_t, uint32_t>> forward;
  forward.reserve(graph.edges().size());
  for (const auto& e : graph.edges()) forward.emplace_back(index(e.src), index(e.dst));
  Csr out = BuildCsr(n, forward);
  for (auto& [a, b] : forward) std::swap(a, b);
  Csr in = BuildCsr(n, forward);
  forward = {};

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<size_t>(threads, std::max<size_t>(n, 1)));
  auto work = [&](size_t begin, size_t end) {
    std::vector<uint32_t> seen_out(n, 0), seen_in(n, 0), frontier, next;
    std::vector<uint32_t> counts(hops);
    uint32_t stamp = 0;
    for (size_t v = begin; v < end; ++v) {
      ++stamp;
      BoundedBfs(out, static_cast<uint32_t>(v), hops, stamp, seen_out, frontier, next,
                 counts.data());
      for (uint32_t k = 1; k <= hops; ++k) table.MutableOut(v, k) = counts[k - 1];
      BoundedBfs(in, static_cast<uint32_t>(v), hops, stamp, seen_in, frontier, next,
                 counts.data());
      for (uint32_t k = 1; k <= hops; ++k) table.MutableIn(v, k) = counts[k - 1];
    }
  };
  if (threads <= 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      size_t begin = t * chunk;
      size_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(work, begin, end);
    }
    for (auto& th : pool) th.join();
  }
  return table;
}

}  // namespace shardgnn
