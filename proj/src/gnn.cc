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

#include "shardgnn/gnn.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "shardgnn/random.h"
#include "shardgnn/skipgram.h"

namespace shardgnn {

void TrainConfig::Validate() const {
  if (d == 0 || k_max == 0) throw Error(ErrorCode::kUsage, "d and k_max must be >= 1");
  if (hop_nums.size() != k_max) {
    throw Error(ErrorCode::kUsage,
                fmt::format("need {} hop sizes, got {}", k_max, hop_nums.size()));
  }
  for (uint32_t h : hop_nums) {
    if (h == 0) throw Error(ErrorCode::kUsage, "hop sizes must be >= 1");
  }
  if (neg_num == 0 || window == 0 || walks_per_vertex == 0 || batch_size == 0) {
    throw Error(ErrorCode::kUsage, "counts must be positive");
  }
  if (walk_len < 2) throw Error(ErrorCode::kUsage, "walk length must be > 1");
  if (!(lr >= 0) || !std::isfinite(lr)) throw Error(ErrorCode::kUsage, "bad learning rate");
}

Objective ParseObjective(std::string_view name) {
  if (name == "skipgram") return Objective::kSkipgram;
  if (name == "supervised-linkpred") return Objective::kSupervisedLinkPred;
  throw Error(ErrorCode::kUsage, fmt::format("unknown objective '{}'", name));
}

GnnModel GnnModel::Init(const TrainConfig& cfg, size_t feature_arity) {
  GnnModel model;
  for (uint32_t k = 1; k <= cfg.k_max; ++k) {
    // Linear output hop: a rectified output keeps every embedding in the
    // nonnegative orthant, where negatives cannot be pushed apart.
    Activation act = k == cfg.k_max ? Activation::kIdentity : cfg.activation;
    model.layers.push_back(
        OperatorSpec::Init(cfg.d, cfg.aggregate, cfg.combine, act, MixSeed({cfg.seed, 0x6c, k})));
  }
  if (feature_arity != cfg.d) {
    double bound = 1.0 / std::sqrt(static_cast<double>(std::max<size_t>(feature_arity, 1)));
    model.projection =
        Matrix::Uniform(cfg.d, feature_arity, bound, MixSeed({cfg.seed, 0x70726f6a}));
  }
  return model;
}

GnnGrads::GnnGrads(const GnnModel& model)
    : projection(model.projection.rows(), model.projection.cols()) {
  for (const auto& l : model.layers) layers.emplace_back(l);
}

const SampledNeighbors& SamplePlan::Get(VertexId v, uint32_t k) const {
  auto it = samples_.find(v);
  if (it == samples_.end() || k >= it->second.size() || it->second[k].ids.empty()) {
    throw Error(ErrorCode::kStateMissing, fmt::format("no hop-{} sample for vertex {}", k, v));
  }
  return it->second[k];
}

void SamplePlan::Set(VertexId v, uint32_t k, SampledNeighbors sample) {
  auto& slots = samples_[v];
  if (slots.size() < needed_.size()) slots.resize(needed_.size());
  slots[k] = std::move(sample);
}

GnnRuntime::GnnRuntime(GraphService& service, TrainConfig cfg, GnnModel model)
    : service_(service), cfg_(std::move(cfg)), model_(std::move(model)) {
  cfg_.Validate();
  if (model_.layers.size() != cfg_.k_max) {
    throw Error(ErrorCode::kSchema, "model depth differs from k_max");
  }
}

SamplePlan GnnRuntime::Plan(std::span<const VertexId> batch, uint64_t seed) {
  const uint32_t k_max = cfg_.k_max;
  SamplePlan plan(k_max);
  auto& top = plan.MutableNeeded(k_max);
  top.assign(batch.begin(), batch.end());
  std::sort(top.begin(), top.end());
  top.erase(std::unique(top.begin(), top.end()), top.end());
  for (uint32_t k = k_max; k >= 1; --k) {
    const auto& need = plan.Needed(k);
    std::vector<VertexId> next = need;
    if (cfg_.full_neighborhood) {
      for (VertexId v : need) {
        SampledNeighbors s;
        for (const auto& r : service_.FetchNeighbors(v)) {
          if (!Matches(cfg_.edge_type, r.edge_type)) continue;
          s.ids.push_back(r.neighbor);
          s.weights.push_back(r.weight);
        }
        if (s.ids.empty()) {
          s.ids.push_back(v);
          s.weights.push_back(1.0);
        }
        next.insert(next.end(), s.ids.begin(), s.ids.end());
        plan.Set(v, k, std::move(s));
      }
    } else {
      std::vector<ExpandTask> tasks;
      tasks.reserve(need.size());
      const uint32_t fanout = cfg_.hop_nums[k_max - k];
      for (VertexId v : need) {
        tasks.push_back({v, fanout, MixSeed({seed, v, k}), service_.OwnerOf(v)});
      }
      auto results = service_.Expand(tasks, cfg_.edge_type);
      for (size_t i = 0; i < need.size(); ++i) {
        next.insert(next.end(), results[i].ids.begin(), results[i].ids.end());
        plan.Set(need[i], k, {std::move(results[i].ids), std::move(results[i].weights)});
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    plan.MutableNeeded(k - 1) = std::move(next);
  }
  return plan;
}

const Vector& GnnRuntime::RawFeatures(VertexId v) {
  auto it = features_.find(v);
  if (it != features_.end()) return it->second;
  std::vector<VertexId> one{v};
  auto fetched = service_.FetchAttributes(one);
  return features_.emplace(v, std::move(fetched.front())).first->second;
}

Vector GnnRuntime::InputVector(VertexId v) {
  const Vector& raw = RawFeatures(v);
  if (model_.projection.empty()) {
    if (raw.size() != cfg_.d) {
      throw Error(ErrorCode::kFeatureMissing,
                  fmt::format("vertex {} has {} features, model expects {}", v, raw.size(),
                              cfg_.d));
    }
    return raw;
  }
  if (raw.size() != model_.projection.cols()) {
    throw Error(ErrorCode::kFeatureMissing,
                fmt::format("vertex {} has {} features, projection expects {}", v, raw.size(),
                            model_.projection.cols()));
  }
  return model_.projection.Apply(raw);
}

std::vector<Vector> GnnRuntime::Forward(std::span<const VertexId> batch, const SamplePlan& plan,
                                        bool memoize, ForwardStats* stats, ForwardTape* tape) {
  std::vector<VertexId> missing;
  for (VertexId v : plan.Needed(0)) {
    if (!features_.count(v)) missing.push_back(v);
  }
  if (!missing.empty()) {
    auto fetched = service_.FetchAttributes(missing);
    for (size_t i = 0; i < missing.size(); ++i) features_.emplace(missing[i], std::move(fetched[i]));
  }
  EmbeddingStore store(cfg_.k_max);
  for (VertexId v : plan.Needed(0)) store.Put(v, 0, InputVector(v));
  NeighborProvider provider = [&plan](VertexId v, uint32_t k) -> const SampledNeighbors& {
    return plan.Get(v, k);
  };
  ForwardStats local;
  ForwardStats& st = stats ? *stats : local;
  std::vector<Vector> out;
  out.reserve(batch.size());
  for (VertexId v : batch) {
    out.push_back(*MemoizedForward(store, v, cfg_.k_max, model_.layers, provider, memoize, st,
                                   tape));
  }
  return out;
}

std::vector<Vector> GnnRuntime::Embed(std::span<const VertexId> batch, uint64_t seed) {
  SamplePlan plan = Plan(batch, seed);
  return Forward(batch, plan, true);
}

void GnnRuntime::Backward(const ForwardTape& tape,
                          const std::unordered_map<VertexId, Vector>& upstream,
                          GnnGrads& grads) {
  const uint32_t k_max = cfg_.k_max;
  const size_t d = cfg_.d;
  std::vector<std::unordered_map<VertexId, Vector>> grad(k_max + 1);
  auto accumulate = [&](uint32_t k, VertexId v, const Vector& g) {
    auto [it, inserted] = grad[k].try_emplace(v, g);
    if (!inserted) {
      for (size_t i = 0; i < d; ++i) it->second[i] += g[i];
    }
  };
  for (const auto& [v, g] : upstream) accumulate(k_max, v, g);
  for (auto node = tape.nodes.rbegin(); node != tape.nodes.rend(); ++node) {
    auto it = grad[node->k].find(node->v);
    if (it == grad[node->k].end()) continue;
    const OperatorSpec& spec = model_.layers[node->k - 1];
    OperatorGrads& g = grads.layers[node->k - 1];
    Vector d_combined = L2NormalizeBackward(node->combined, it->second);
    auto [d_prev, d_agg] = CombineBackward(spec, node->combine, d_combined, &g);
    accumulate(node->k - 1, node->v, d_prev);
    auto d_inputs = AggregateBackward(spec, node->aggregate, d_agg, &g);
    for (size_t i = 0; i < node->neighbors.size(); ++i) {
      accumulate(node->k - 1, node->neighbors[i], d_inputs[i]);
    }
  }
  if (!model_.projection.empty()) {
    for (const auto& [v, g] : grad[0]) grads.projection.AddOuter(g, RawFeatures(v));
  }
}

namespace {

void SgdStep(GnnModel& model, const GnnGrads& grads, double lr) {
  if (lr == 0.0) return;
  auto step = [lr](std::vector<double>& p, const std::vector<double>& g) {
    for (size_t i = 0; i < p.size(); ++i) p[i] -= lr * g[i];
  };
  for (size_t l = 0; l < model.layers.size(); ++l) {
    step(model.layers[l].w.data(), grads.layers[l].w.data());
    step(model.layers[l].pool_w.data(), grads.layers[l].pool_w.data());
    step(model.layers[l].pool_b, grads.layers[l].pool_b);
  }
  step(model.projection.data(), grads.projection.data());
}

}  // namespace

TrainResult Train(GraphService& service, const TrainConfig& cfg, Objective objective,
                  size_t feature_arity, std::span<const VertexId> vertices,
                  const StepLogger& log) {
  cfg.Validate();
  GnnRuntime rt(service, cfg, GnnModel::Init(cfg, feature_arity));
  TrainResult result;

  std::vector<std::pair<VertexId, VertexId>> corpus;
  if (objective == Objective::kSkipgram) {
    WalkConfig walk{cfg.edge_type, cfg.walk_len, cfg.walks_per_vertex, cfg.window,
                    MixSeed({cfg.seed, 0x77616c6b})};
    corpus = RandomWalkCorpus(service, vertices, walk);
    if (corpus.empty()) throw Error(ErrorCode::kEmptyDomain, "random walks produced no pairs");
  }

  uint64_t step = 0;
  for (uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<std::vector<std::pair<VertexId, VertexId>>> batches;
    if (objective == Objective::kSkipgram) {
      std::vector<size_t> order(corpus.size());
      std::iota(order.begin(), order.end(), 0);
      Rng rng(MixSeed({cfg.seed, epoch, 0x73687566}));
      for (size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.Below(i)]);
      for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
        auto& b = batches.emplace_back();
        for (size_t i = start; i < std::min(order.size(), start + cfg.batch_size); ++i) {
          b.push_back(corpus[order[i]]);
        }
      }
    } else {
      size_t steps = std::max<size_t>(1, (vertices.size() + cfg.batch_size - 1) / cfg.batch_size);
      for (size_t s = 0; s < steps; ++s) {
        uint64_t seed = MixSeed({cfg.seed, epoch, s, 0x6c70});
        auto centers = service.TraverseSampleGlobal(cfg.edge_type, cfg.batch_size, seed);
        std::vector<ExpandTask> tasks;
        for (size_t i = 0; i < centers.size(); ++i) {
          tasks.push_back({centers[i], 1, MixSeed({seed, centers[i], i}),
                           service.OwnerOf(centers[i])});
        }
        auto ctx = service.Expand(tasks, cfg.edge_type);
        auto& b = batches.emplace_back();
        for (size_t i = 0; i < centers.size(); ++i) b.emplace_back(centers[i], ctx[i].ids.front());
      }
    }

    double epoch_loss = 0.0;
    for (const auto& batch : batches) {
      const size_t n = batch.size();
      std::vector<VertexId> centers(n);
      for (size_t i = 0; i < n; ++i) centers[i] = batch[i].first;
      auto negatives = service.NegativeSample(centers, cfg.edge_type, cfg.neg_num,
                                              MixSeed({cfg.seed, step, 0x6e6567}));
      std::vector<VertexId> roots = centers;
      for (const auto& p : batch) roots.push_back(p.second);
      roots.insert(roots.end(), negatives.begin(), negatives.end());
      std::sort(roots.begin(), roots.end());
      roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

      SamplePlan plan = rt.Plan(roots, MixSeed({cfg.seed, step, 0x706c616e}));
      ForwardTape tape;
      auto emb = rt.Forward(roots, plan, true, nullptr, &tape);
      std::unordered_map<VertexId, size_t> at;
      for (size_t i = 0; i < roots.size(); ++i) at.emplace(roots[i], i);

      std::unordered_map<VertexId, Vector> upstream;
      auto add = [&](VertexId v, const Vector& g, double scale) {
        auto [it, inserted] = upstream.try_emplace(v, Vector(cfg.d, 0.0));
        for (size_t i = 0; i < cfg.d; ++i) it->second[i] += scale * g[i];
      };
      double loss = 0.0;
      const double scale = 1.0 / static_cast<double>(n);
      for (size_t i = 0; i < n; ++i) {
        std::vector<std::span<const double>> negs;
        for (uint32_t j = 0; j < cfg.neg_num; ++j) {
          negs.emplace_back(emb[at.at(negatives[i * cfg.neg_num + j])]);
        }
        auto ns = SkipgramNsLoss(emb[at.at(batch[i].first)], emb[at.at(batch[i].second)], negs);
        loss += ns.loss;
        add(batch[i].first, ns.d_center, scale);
        add(batch[i].second, ns.d_context, scale);
        for (uint32_t j = 0; j < cfg.neg_num; ++j) {
          add(negatives[i * cfg.neg_num + j], ns.d_negatives[j], scale);
        }
      }
      loss *= scale;
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::kDivergence,
                    fmt::format("loss {} at epoch {} step {} (lr {})", loss, epoch, step, cfg.lr));
      }
      GnnGrads grads(rt.model());
      rt.Backward(tape, upstream, grads);
      SgdStep(rt.mutable_model(), grads, cfg.lr);
      result.step_losses.push_back(loss);
      epoch_loss += loss;
      if (log) log(epoch, step, loss);
      ++step;
    }
    result.epoch_losses.push_back(epoch_loss / static_cast<double>(batches.size()));
  }
  result.model = rt.model();
  return result;
}

std::vector<Vector> EmbedAll(GraphService& service, const TrainConfig& cfg,
                             const GnnModel& model, std::span<const VertexId> vertices) {
  GnnRuntime rt(service, cfg, model);
  std::vector<Vector> out;
  out.reserve(vertices.size());
  constexpr size_t kChunk = 512;
  for (size_t start = 0; start < vertices.size(); start += kChunk) {
    auto chunk = vertices.subspan(start, std::min(kChunk, vertices.size() - start));
    auto emb = rt.Embed(chunk, MixSeed({cfg.seed, start, 0x656d62}));
    for (auto& e : emb) out.push_back(std::move(e));
  }
  return out;
}

}  // namespace shardgnn
