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

#include "shardgnn/sampling.h"

#include <pthread.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <future>
#include <thread>

#include <fmt/format.h>

#include "shardgnn/lru_cache.h"
#include "shardgnn/mpsc_queue.h"
#include "shardgnn/random.h"

namespace shardgnn {

using RecordList = std::shared_ptr<const std::vector<AdjacencyRecord>>;

class Bucket {
 public:
  using Job = std::function<void(Bucket&)>;

  Bucket(GraphService& service, ShardId shard, uint32_t group, size_t capacity)
      : service(service), shard(shard), group(group), queue_(capacity) {}

  ~Bucket() { Stop(); }

  void Start(bool pin, unsigned cpu) {
    thread_ = std::thread([this] { Loop(); });
    if (pin) {
      cpu_set_t set;
      CPU_ZERO(&set);
      CPU_SET(cpu, &set);
      pthread_setaffinity_np(thread_.native_handle(), sizeof(set), &set);
    }
  }

  void Stop() {
    if (!thread_.joinable()) return;
    stop_.store(true);
    signal_.fetch_add(1);
    signal_.notify_one();
    thread_.join();
  }

  // Blocks (yielding) while the queue is full.
  void Post(Job job) {
    auto* boxed = new Job(std::move(job));
    while (!queue_.TryPush(boxed)) std::this_thread::yield();
    signal_.fetch_add(1);
    if (sleeping_.load()) signal_.notify_one();
  }

  template <typename R, typename Fn>
  std::future<R> Call(Fn fn) {
    auto promise = std::make_shared<std::promise<R>>();
    auto future = promise->get_future();
    Post([promise, fn = std::move(fn)](Bucket& b) mutable {
      try {
        if constexpr (std::is_void_v<R>) {
          fn(b);
          promise->set_value();
        } else {
          promise->set_value(fn(b));
        }
      } catch (...) {
        promise->set_exception(std::current_exception());
      }
    });
    return future;
  }

  ShardedGraph& graph() { return service.shards_[shard]; }

  GraphService& service;
  const ShardId shard;
  const uint32_t group;
  LruCache<VertexId, RecordList> lru{0};

 private:
  void Run(Job* job) {
    try {
      (*job)(*this);
    } catch (...) {
      // Jobs report through their promises; nothing else may escape.
    }
    delete job;
  }

  void Loop() {
    Job* job = nullptr;
    for (;;) {
      if (queue_.TryPop(job)) {
        Run(job);
        continue;
      }
      if (stop_.load()) break;
      uint32_t seen = signal_.load();
      sleeping_.store(true);
      if (queue_.TryPop(job)) {
        sleeping_.store(false);
        Run(job);
        continue;
      }
      if (!stop_.load()) signal_.wait(seen);
      sleeping_.store(false);
    }
  }

  BoundedMpscQueue<Job*> queue_;
  std::atomic<uint32_t> signal_{0};
  std::atomic<bool> sleeping_{false};
  std::atomic<bool> stop_{false};
  std::thread thread_;
};

namespace {

size_t DrawIndex(const std::vector<double>& prefix, Rng& rng) {
  double u = rng.Uniform() * prefix.back();
  auto it = std::upper_bound(prefix.begin(), prefix.end(), u);
  return std::min<size_t>(it - prefix.begin(), prefix.size() - 1);
}

template <typename T>
std::vector<T> Gather(std::vector<std::future<T>>& futures) {
  std::vector<T> out;
  out.reserve(futures.size());
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

}  // namespace

ExpandResult SampleNeighbors(std::span<const AdjacencyRecord> records, EdgeType type,
                             VertexId parent, uint32_t count, uint64_t seed) {
  ExpandResult out;
  out.ids.reserve(count);
  out.weights.reserve(count);
  std::vector<const AdjacencyRecord*> match;
  std::vector<double> prefix;
  double total = 0.0;
  for (const auto& r : records) {
    if (!Matches(type, r.edge_type)) continue;
    match.push_back(&r);
    total += r.sampling_weight;
    prefix.push_back(total);
  }
  if (match.empty()) {
    out.padded = true;
    out.ids.assign(count, parent);
    out.weights.assign(count, 1.0);
    return out;
  }
  Rng rng(seed);
  for (uint32_t i = 0; i < count; ++i) {
    size_t k = total > 0 ? DrawIndex(prefix, rng) : rng.Below(match.size());
    out.ids.push_back(match[k]->neighbor);
    out.weights.push_back(match[k]->weight);
  }
  return out;
}

GraphService::GraphService(std::vector<ShardedGraph>& shards, SamplerOptions options)
    : shards_(shards), options_(options) {
  if (shards_.empty()) throw Error(ErrorCode::kUsage, "no shards to serve");
  groups_ = options_.buckets_per_shard
                ? options_.buckets_per_shard
                : std::max(1u, std::thread::hardware_concurrency());
  bounds_.resize(shards_.size());
  for (ShardId s = 0; s < shards_.size(); ++s) {
    const auto& owned = shards_[s].owned_vertices();
    for (uint32_t g = 1; g < groups_; ++g) {
      size_t at = static_cast<size_t>(g) * owned.size() / groups_;
      bounds_[s].push_back(at < owned.size() ? owned[at]
                                             : std::numeric_limits<VertexId>::max());
    }
  }
  unsigned cores = std::max(1u, std::thread::hardware_concurrency());
  for (ShardId s = 0; s < shards_.size(); ++s) {
    for (uint32_t g = 0; g < groups_; ++g) {
      buckets_.push_back(std::make_unique<Bucket>(*this, s, g, options_.queue_capacity));
    }
  }
  for (size_t i = 0; i < buckets_.size(); ++i) {
    buckets_[i]->Start(options_.pin_cores, static_cast<unsigned>(i % cores));
  }
}

GraphService::~GraphService() {
  for (auto& b : buckets_) b->Stop();
}

ShardId GraphService::OwnerOf(VertexId v) const { return shards_.front().OwnerOf(v); }

uint32_t GraphService::Route(ShardId shard, VertexId v) const {
  const auto& b = bounds_.at(shard);
  return static_cast<uint32_t>(std::upper_bound(b.begin(), b.end(), v) - b.begin());
}

std::shared_ptr<const GraphService::Table> GraphService::EligibleSources(ShardId shard,
                                                                        EdgeType type) {
  uint64_t key = (uint64_t{shard} << 32) | (uint64_t{1} << 16) | type.code;
  std::lock_guard lock(tables_mu_);
  if (auto it = tables_.find(key); it != tables_.end()) return it->second;
  auto table = std::make_shared<Table>();
  const auto& g = shards_[shard];
  for (VertexId v : g.owned_vertices()) {
    for (const auto& r : g.OwnedNeighbors(v)) {
      if (Matches(type, r.edge_type)) {
        table->ids.push_back(v);
        break;
      }
    }
  }
  tables_.emplace(key, table);
  return table;
}

std::shared_ptr<const GraphService::Table> GraphService::NegativeCandidates(ShardId shard,
                                                                           EdgeType type) {
  uint64_t key = (uint64_t{shard} << 32) | (uint64_t{2} << 16) | type.code;
  std::lock_guard lock(tables_mu_);
  if (auto it = tables_.find(key); it != tables_.end()) return it->second;
  auto table = std::make_shared<Table>();
  const auto& g = shards_[shard];
  const std::vector<VertexType>* allowed =
      type == kAnyEdgeType ? nullptr : g.destination_types(type);
  if (type == kAnyEdgeType || allowed) {
    double total = 0.0;
    for (VertexId v : g.owned_vertices()) {
      if (allowed && !std::binary_search(allowed->begin(), allowed->end(), g.vertex_type(v))) {
        continue;
      }
      double w = std::pow(static_cast<double>(g.degree(v)), 0.75);
      if (w <= 0) continue;
      total += w;
      table->ids.push_back(v);
      table->prefix.push_back(total);
    }
  }
  tables_.emplace(key, table);
  return table;
}

void GraphService::SeedLru(ShardId shard, std::span<const VertexId> vertices) {
  if (!options_.lru) throw Error(ErrorCode::kUsage, "service was started without an LRU");
  std::vector<std::vector<VertexId>> per_group(groups_);
  for (VertexId v : vertices) per_group[Route(shard, v)].push_back(v);
  for (uint32_t g = 0; g < groups_; ++g) {
    auto& list = per_group[g];
    std::sort(list.begin(), list.end());
    std::vector<RecordList> records;
    for (VertexId v : list) {
      records.push_back(std::make_shared<const std::vector<AdjacencyRecord>>(FetchNeighbors(v)));
    }
    bucket(shard, g)
        .Call<void>([&list, &records](Bucket& b) {
          b.lru = LruCache<VertexId, RecordList>(list.size());
          for (size_t i = 0; i < list.size(); ++i) b.lru.Put(list[i], records[i]);
        })
        .get();
  }
}

std::vector<VertexId> GraphService::TraverseSample(ShardId shard, EdgeType type,
                                                   size_t batch_size, uint64_t seed) {
  if (batch_size == 0) throw Error(ErrorCode::kUsage, "batch size must be >= 1");
  return bucket(shard, 0)
      .Call<std::vector<VertexId>>([=](Bucket& b) {
        auto table = b.service.EligibleSources(b.shard, type);
        if (table->ids.empty()) {
          throw Error(ErrorCode::kEmptyDomain,
                      fmt::format("shard {} has no source of this edge type", b.shard));
        }
        Rng rng(MixSeed({seed, b.shard, 0x7472ULL}));
        std::vector<VertexId> out(batch_size);
        for (auto& v : out) v = table->ids[rng.Below(table->ids.size())];
        return out;
      })
      .get();
}

std::vector<VertexId> GraphService::TraverseSampleGlobal(EdgeType type, size_t batch_size,
                                                         uint64_t seed) {
  if (batch_size == 0) throw Error(ErrorCode::kUsage, "batch size must be >= 1");
  std::vector<std::future<std::shared_ptr<const Table>>> futures;
  for (ShardId s = 0; s < num_shards(); ++s) {
    futures.push_back(bucket(s, 0).Call<std::shared_ptr<const Table>>(
        [type](Bucket& b) { return b.service.EligibleSources(b.shard, type); }));
  }
  auto tables = Gather(futures);
  std::vector<double> prefix;
  double total = 0;
  for (const auto& t : tables) prefix.push_back(total += static_cast<double>(t->ids.size()));
  if (total == 0) throw Error(ErrorCode::kEmptyDomain, "no source of this edge type");
  Rng rng(MixSeed({seed, 0x676cULL}));
  std::vector<VertexId> out(batch_size);
  for (auto& v : out) {
    uint64_t k = rng.Below(static_cast<uint64_t>(total));
    size_t s = std::upper_bound(prefix.begin(), prefix.end(), static_cast<double>(k)) -
               prefix.begin();
    uint64_t base = s ? static_cast<uint64_t>(prefix[s - 1]) : 0;
    v = tables[s]->ids[k - base];
  }
  return out;
}

std::vector<ExpandResult> GraphService::Expand(std::span<const ExpandTask> tasks,
                                               EdgeType type) {
  std::vector<ExpandResult> results(tasks.size());
  const size_t nb = buckets_.size();

  // Phase A: the home shard serves owned and cached vertices.
  std::vector<std::vector<size_t>> by_home(nb);
  for (size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].home >= num_shards()) throw Error(ErrorCode::kUsage, "home shard out of range");
    by_home[BucketIndex(tasks[i].home, tasks[i].parent)].push_back(i);
  }
  std::vector<std::future<std::vector<size_t>>> pending;
  for (size_t b = 0; b < nb; ++b) {
    if (by_home[b].empty()) continue;
    pending.push_back(buckets_[b]->Call<std::vector<size_t>>(
        [&, list = std::move(by_home[b])](Bucket& bk) {
          std::vector<size_t> misses;
          const auto& g = bk.graph();
          for (size_t i : list) {
            const auto& t = tasks[i];
            if (g.Owns(t.parent)) {
              results[i] = SampleNeighbors(g.OwnedNeighbors(t.parent), type, t.parent,
                                           t.count, t.seed);
              results[i].provenance = Provenance::kLocal;
            } else if (const auto* hops = g.CachedHops(t.parent); hops && !hops->empty()) {
              results[i] = SampleNeighbors(hops->front(), type, t.parent, t.count, t.seed);
              results[i].provenance = Provenance::kCache;
            } else if (RecordList* hit = bk.lru.Get(t.parent)) {
              results[i] = SampleNeighbors(**hit, type, t.parent, t.count, t.seed);
              results[i].provenance = Provenance::kCache;
            } else {
              misses.push_back(i);
            }
          }
          return misses;
        }));
  }
  std::vector<size_t> misses;
  for (auto& f : pending) {
    auto part = f.get();
    misses.insert(misses.end(), part.begin(), part.end());
  }
  std::sort(misses.begin(), misses.end());
  uint64_t local = 0;
  uint64_t cached = 0;
  {
    size_t m = 0;
    for (size_t i = 0; i < tasks.size(); ++i) {
      if (m < misses.size() && misses[m] == i) {
        ++m;
        continue;
      }
      (results[i].provenance == Provenance::kLocal ? local : cached)++;
    }
  }
  local_tasks_ += local;
  cache_tasks_ += cached;
  remote_tasks_ += misses.size();
  if (misses.empty()) return results;

  // One remote request per distinct (home bucket, vertex) pair.
  std::map<std::pair<size_t, VertexId>, std::vector<size_t>> fetch;
  for (size_t i : misses) {
    fetch[{BucketIndex(tasks[i].home, tasks[i].parent), tasks[i].parent}].push_back(i);
  }
  remote_fetches_ += fetch.size();

  if (!options_.lru) {
    // Phase B: sample at the owner.
    std::vector<std::vector<size_t>> by_owner(nb);
    for (size_t i : misses) {
      VertexId v = tasks[i].parent;
      by_owner[BucketIndex(OwnerOf(v), v)].push_back(i);
    }
    std::vector<std::future<void>> done;
    for (size_t b = 0; b < nb; ++b) {
      if (by_owner[b].empty()) continue;
      done.push_back(buckets_[b]->Call<void>([&, list = std::move(by_owner[b])](Bucket& bk) {
        const auto& g = bk.graph();
        for (size_t i : list) {
          const auto& t = tasks[i];
          std::span<const AdjacencyRecord> recs;
          if (g.Owns(t.parent)) recs = g.OwnedNeighbors(t.parent);
          results[i] = SampleNeighbors(recs, type, t.parent, t.count, t.seed);
          results[i].provenance = Provenance::kRemote;
        }
      }));
    }
    for (auto& f : done) f.get();
    return results;
  }

  // Phase B with a runtime LRU: fetch the adjacency from the owner, then
  // install it at the home bucket and sample there.
  std::vector<std::pair<std::pair<size_t, VertexId>, std::future<RecordList>>> fetched;
  for (const auto& [key, _] : fetch) {
    VertexId v = key.second;
    fetched.emplace_back(key, buckets_[BucketIndex(OwnerOf(v), v)]->Call<RecordList>(
                                  [v](Bucket& bk) {
                                    const auto& g = bk.graph();
                                    std::vector<AdjacencyRecord> copy;
                                    if (g.Owns(v)) {
                                      auto recs = g.OwnedNeighbors(v);
                                      copy.assign(recs.begin(), recs.end());
                                    }
                                    return std::make_shared<const std::vector<AdjacencyRecord>>(
                                        std::move(copy));
                                  }));
  }
  std::vector<std::vector<std::pair<RecordList, const std::vector<size_t>*>>> installs(nb);
  for (auto& [key, future] : fetched) {
    installs[key.first].emplace_back(future.get(), &fetch.at(key));
  }
  std::vector<std::future<void>> done;
  for (size_t b = 0; b < nb; ++b) {
    if (installs[b].empty()) continue;
    done.push_back(buckets_[b]->Call<void>([&, list = std::move(installs[b])](Bucket& bk) {
      for (const auto& [recs, idxs] : list) {
        bk.lru.Put(tasks[idxs->front()].parent, recs);
        for (size_t i : *idxs) {
          const auto& t = tasks[i];
          results[i] = SampleNeighbors(*recs, type, t.parent, t.count, t.seed);
          results[i].provenance = Provenance::kRemote;
        }
      }
    }));
  }
  for (auto& f : done) f.get();
  return results;
}

NeighborhoodResult GraphService::NeighborhoodSample(std::span<const VertexId> vertices,
                                                    EdgeType type,
                                                    std::span<const uint32_t> hop_nums,
                                                    uint64_t seed) {
  if (hop_nums.empty()) throw Error(ErrorCode::kUsage, "need at least one hop");
  for (uint32_t h : hop_nums) {
    if (h == 0) throw Error(ErrorCode::kUsage, "hop sizes must be >= 1");
  }
  const size_t n = vertices.size();
  NeighborhoodResult out;
  std::vector<ShardId> home(n);
  for (size_t r = 0; r < n; ++r) home[r] = OwnerOf(vertices[r]);

  for (size_t j = 0; j < hop_nums.size(); ++j) {
    const uint32_t width = hop_nums[j];
    const uint32_t prev = j == 0 ? 1 : hop_nums[j - 1];
    std::vector<ExpandTask> tasks;
    tasks.reserve(n * std::min(prev, width));
    for (size_t r = 0; r < n; ++r) {
      for (uint32_t e = 0; e < std::min(prev, width); ++e) {
        VertexId parent = j == 0 ? vertices[r] : out.ids[j - 1][r * prev + e];
        uint32_t count = (width - e + prev - 1) / prev;
        tasks.push_back({parent, count, MixSeed({seed, vertices[r], j + 1, e}), home[r]});
      }
    }
    auto results = Expand(tasks, type);
    out.ids.emplace_back(n * width);
    out.weights.emplace_back(n * width);
    out.provenance.emplace_back(n * width);
    out.padded.emplace_back(n * width);
    size_t t = 0;
    for (size_t r = 0; r < n; ++r) {
      for (uint32_t e = 0; e < std::min(prev, width); ++e, ++t) {
        const auto& res = results[t];
        for (size_t c = 0; c < res.ids.size(); ++c) {
          size_t pos = r * width + e + c * prev;
          out.ids[j][pos] = res.ids[c];
          out.weights[j][pos] = res.weights[c];
          out.provenance[j][pos] = res.provenance;
          out.padded[j][pos] = res.padded;
        }
      }
    }
  }
  return out;
}

namespace {

struct NegativeOutcome {
  bool exhausted = false;
  std::vector<VertexId> exclude;  // sorted; filled only when exhausted
};

// Draws `count` candidates not in `exclude`. Returns false when none exists.
bool DrawNegatives(const std::vector<VertexId>& ids, const std::vector<double>& prefix,
                   const std::vector<VertexId>& exclude, uint32_t count, Rng& rng,
                   VertexId* out) {
  if (ids.empty() || prefix.back() <= 0) return false;
  auto excluded = [&](VertexId v) {
    return std::binary_search(exclude.begin(), exclude.end(), v);
  };
  std::vector<VertexId> kept_ids;
  std::vector<double> kept_prefix;
  bool filtered = false;
  for (uint32_t i = 0; i < count; ++i) {
    if (!filtered) {
      bool accepted = false;
      for (int attempt = 0; attempt < 64; ++attempt) {
        VertexId c = ids[DrawIndex(prefix, rng)];
        if (!excluded(c)) {
          out[i] = c;
          accepted = true;
          break;
        }
      }
      if (accepted) continue;
      // Rejection keeps failing: build the filtered distribution once.
      double total = 0.0;
      for (size_t k = 0; k < ids.size(); ++k) {
        if (excluded(ids[k])) continue;
        total += prefix[k] - (k ? prefix[k - 1] : 0.0);
        kept_ids.push_back(ids[k]);
        kept_prefix.push_back(total);
      }
      filtered = true;
      if (kept_ids.empty() || total <= 0) return false;
    }
    out[i] = kept_ids[DrawIndex(kept_prefix, rng)];
  }
  return true;
}

}  // namespace

std::vector<VertexId> GraphService::NegativeSample(std::span<const VertexId> vertices,
                                                   EdgeType type, uint32_t neg_num,
                                                   uint64_t seed) {
  if (neg_num == 0) throw Error(ErrorCode::kUsage, "neg_num must be >= 1");
  const size_t n = vertices.size();
  std::vector<VertexId> out(n * neg_num);
  std::vector<NegativeOutcome> outcomes(n);
  std::vector<std::vector<size_t>> by_bucket(buckets_.size());
  for (size_t q = 0; q < n; ++q) {
    by_bucket[BucketIndex(OwnerOf(vertices[q]), vertices[q])].push_back(q);
  }
  std::vector<std::future<void>> done;
  for (size_t b = 0; b < buckets_.size(); ++b) {
    if (by_bucket[b].empty()) continue;
    done.push_back(buckets_[b]->Call<void>([&, list = std::move(by_bucket[b])](Bucket& bk) {
      const auto& g = bk.graph();
      auto table = bk.service.NegativeCandidates(bk.shard, type);
      for (size_t q : list) {
        VertexId v = vertices[q];
        std::vector<VertexId> exclude{v};
        if (g.Owns(v)) {
          for (const auto& r : g.OwnedNeighbors(v)) {
            if (Matches(type, r.edge_type)) exclude.push_back(r.neighbor);
          }
        }
        std::sort(exclude.begin(), exclude.end());
        exclude.erase(std::unique(exclude.begin(), exclude.end()), exclude.end());
        Rng rng(MixSeed({seed, v, q, 0x6e6567ULL}));
        if (!DrawNegatives(table->ids, table->prefix, exclude, neg_num, rng,
                           out.data() + q * neg_num)) {
          outcomes[q] = {true, std::move(exclude)};
        }
      }
    }));
  }
  for (auto& f : done) f.get();

  // Rare fallback: other shards, in order, with an explicit exclusion list.
  for (size_t q = 0; q < n; ++q) {
    if (!outcomes[q].exhausted) continue;
    ShardId home = OwnerOf(vertices[q]);
    bool found = false;
    for (ShardId step = 1; step < num_shards() && !found; ++step) {
      ShardId s = (home + step) % num_shards();
      found = bucket(s, 0)
                  .Call<bool>([&, q, s](Bucket& bk) {
                    auto table = bk.service.NegativeCandidates(bk.shard, type);
                    Rng rng(MixSeed({seed, vertices[q], q, s, 0x6e6567ULL}));
                    return DrawNegatives(table->ids, table->prefix, outcomes[q].exclude,
                                         neg_num, rng, out.data() + q * neg_num);
                  })
                  .get();
    }
    if (!found) {
      throw Error(ErrorCode::kCandidateExhausted,
                  fmt::format("no negative candidate for vertex {}", vertices[q]));
    }
  }
  return out;
}

uint64_t GraphService::UpdateWeights(std::span<const WeightUpdate> updates, EdgeType type,
                                     UpdateMode mode) {
  std::vector<std::vector<WeightUpdate>> by_bucket(buckets_.size());
  for (const auto& u : updates) by_bucket[BucketIndex(OwnerOf(u.v), u.v)].push_back(u);
  const double eta = options_.learning_rate;
  auto apply = [eta, type](Bucket& bk, const std::vector<WeightUpdate>& list) {
    uint64_t applied = 0;
    auto& g = bk.graph();
    for (const auto& u : list) {
      bool hit = false;
      if (g.Owns(u.v)) {
        for (auto& r : g.MutableNeighbors(u.v)) {
          if (r.neighbor != u.u || !Matches(type, r.edge_type)) continue;
          r.sampling_weight = std::max(kMinSamplingWeight, r.sampling_weight - eta * u.gradient);
          hit = true;
        }
      }
      if (hit) {
        ++applied;
      } else {
        bk.service.update_rejects_.fetch_add(1);
      }
    }
    return applied;
  };
  if (mode == UpdateMode::kAsync) {
    for (size_t b = 0; b < buckets_.size(); ++b) {
      if (by_bucket[b].empty()) continue;
      buckets_[b]->Post([apply, list = std::move(by_bucket[b])](Bucket& bk) { apply(bk, list); });
    }
    return 0;
  }
  std::vector<std::future<uint64_t>> futures;
  for (size_t b = 0; b < buckets_.size(); ++b) {
    if (by_bucket[b].empty()) continue;
    futures.push_back(buckets_[b]->Call<uint64_t>(
        [apply, list = std::move(by_bucket[b])](Bucket& bk) { return apply(bk, list); }));
  }
  uint64_t applied = 0;
  for (auto& f : futures) applied += f.get();
  return applied;
}

void GraphService::Flush() {
  std::vector<std::future<void>> futures;
  for (auto& b : buckets_) futures.push_back(b->Call<void>([](Bucket&) {}));
  for (auto& f : futures) f.get();
}

std::vector<AdjacencyRecord> GraphService::FetchNeighbors(VertexId v) {
  return buckets_[BucketIndex(OwnerOf(v), v)]
      ->Call<std::vector<AdjacencyRecord>>([v](Bucket& bk) {
        const auto& g = bk.graph();
        std::vector<AdjacencyRecord> out;
        if (g.Owns(v)) {
          auto recs = g.OwnedNeighbors(v);
          out.assign(recs.begin(), recs.end());
        }
        return out;
      })
      .get();
}

std::vector<std::vector<double>> GraphService::FetchAttributes(
    std::span<const VertexId> vertices) {
  // Attribute caches are per shard, so one bucket per shard serves them.
  std::vector<std::vector<double>> out(vertices.size());
  std::vector<std::vector<size_t>> by_shard(num_shards());
  for (size_t i = 0; i < vertices.size(); ++i) by_shard[OwnerOf(vertices[i])].push_back(i);
  std::vector<std::future<void>> done;
  for (ShardId s = 0; s < num_shards(); ++s) {
    if (by_shard[s].empty()) continue;
    done.push_back(bucket(s, 0).Call<void>([&, list = std::move(by_shard[s])](Bucket& bk) {
      auto& g = bk.graph();
      for (size_t i : list) {
        if (!g.Owns(vertices[i])) {
          throw Error(ErrorCode::kFeatureMissing,
                      fmt::format("no attributes for vertex {}", vertices[i]));
        }
        out[i] = g.vertex_attributes().Get(g.vertex_attr_idx(vertices[i])).values;
      }
    }));
  }
  for (auto& f : done) f.get();
  return out;
}

std::vector<uint64_t> GraphService::FetchDegrees(std::span<const VertexId> vertices) {
  std::vector<uint64_t> out(vertices.size(), 0);
  std::vector<std::vector<size_t>> by_bucket(buckets_.size());
  for (size_t i = 0; i < vertices.size(); ++i) {
    by_bucket[BucketIndex(OwnerOf(vertices[i]), vertices[i])].push_back(i);
  }
  std::vector<std::future<void>> done;
  for (size_t b = 0; b < buckets_.size(); ++b) {
    if (by_bucket[b].empty()) continue;
    done.push_back(buckets_[b]->Call<void>([&, list = std::move(by_bucket[b])](Bucket& bk) {
      const auto& g = bk.graph();
      for (size_t i : list) {
        if (g.Owns(vertices[i])) out[i] = g.degree(vertices[i]);
      }
    }));
  }
  for (auto& f : done) f.get();
  return out;
}

ServiceStats GraphService::stats() const {
  ServiceStats s;
  s.local_tasks = local_tasks_.load();
  s.cache_tasks = cache_tasks_.load();
  s.remote_tasks = remote_tasks_.load();
  s.remote_fetches = remote_fetches_.load();
  s.update_rejects = update_rejects_.load();
  return s;
}

void GraphService::ResetStats() {
  local_tasks_ = 0;
  cache_tasks_ = 0;
  remote_tasks_ = 0;
  remote_fetches_ = 0;
  update_rejects_ = 0;
}

}  // namespace shardgnn
