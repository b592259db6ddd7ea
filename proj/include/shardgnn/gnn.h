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

#ifndef SHARDGNN_GNN_H_
#define SHARDGNN_GNN_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "shardgnn/operators.h"
#include "shardgnn/sampling.h"

namespace shardgnn {

struct TrainConfig {
  size_t d = 16;
  uint32_t k_max = 2;
  // hop_nums[j]: neighbors sampled at distance j + 1 from a batch vertex.
  std::vector<uint32_t> hop_nums{10, 5};
  uint32_t neg_num = 5;
  uint32_t window = 2;
  uint32_t walk_len = 10;
  uint32_t walks_per_vertex = 5;
  double lr = 0.05;
  uint32_t epochs = 10;
  size_t batch_size = 64;
  uint64_t seed = 7;
  AggregateKind aggregate = AggregateKind::kMean;
  CombineKind combine = CombineKind::kSumDense;
  // Hidden hops only; hop k_max is linear.
  Activation activation = Activation::kRelu;
  EdgeType edge_type = kAnyEdgeType;
  // Aggregate over every out-neighbor instead of a sample.
  bool full_neighborhood = false;

  void Validate() const;
};

enum class Objective { kSkipgram, kSupervisedLinkPred };

Objective ParseObjective(std::string_view name);

struct GnnModel {
  std::vector<OperatorSpec> layers;  // layers[k-1] computes hop k
  Matrix projection;                 // d x feature arity; empty when arity == d

  static GnnModel Init(const TrainConfig& cfg, size_t feature_arity);
};

struct GnnGrads {
  std::vector<OperatorGrads> layers;
  Matrix projection;

  explicit GnnGrads(const GnnModel& model);
};

// S^(k)(v) for every (v, k) a batch depends on.
class SamplePlan {
 public:
  explicit SamplePlan(uint32_t k_max) : needed_(k_max + 1) {}

  const SampledNeighbors& Get(VertexId v, uint32_t k) const;
  void Set(VertexId v, uint32_t k, SampledNeighbors sample);
  // Sorted vertices whose hop-k vector the batch needs.
  const std::vector<VertexId>& Needed(uint32_t k) const { return needed_[k]; }
  std::vector<VertexId>& MutableNeeded(uint32_t k) { return needed_[k]; }

 private:
  std::vector<std::vector<VertexId>> needed_;
  std::unordered_map<VertexId, std::vector<SampledNeighbors>> samples_;
};

// Algorithm-1 style forward/backward of the reference mean-aggregator model
// over a GraphService.
class GnnRuntime {
 public:
  GnnRuntime(GraphService& service, TrainConfig cfg, GnnModel model);

  const TrainConfig& config() const { return cfg_; }
  const GnnModel& model() const { return model_; }
  GnnModel& mutable_model() { return model_; }

  // Samples S^(k)(v) with fanout hop_nums[k_max - k] and seed
  // MixSeed({seed, v, k}), from hop k_max down to 1.
  SamplePlan Plan(std::span<const VertexId> batch, uint64_t seed);

  // Hop-k_max vectors of `batch`. With a tape, memoization must be on.
  std::vector<Vector> Forward(std::span<const VertexId> batch, const SamplePlan& plan,
                              bool memoize, ForwardStats* stats = nullptr,
                              ForwardTape* tape = nullptr);

  std::vector<Vector> Embed(std::span<const VertexId> batch, uint64_t seed);

  // Accumulates parameter gradients given d loss / d h for batch outputs.
  void Backward(const ForwardTape& tape,
                const std::unordered_map<VertexId, Vector>& upstream, GnnGrads& grads);

  // Raw input features, fetched once from the owning shards.
  const Vector& RawFeatures(VertexId v);
  Vector InputVector(VertexId v);

 private:
  GraphService& service_;
  TrainConfig cfg_;
  GnnModel model_;
  std::unordered_map<VertexId, Vector> features_;
};

struct TrainResult {
  GnnModel model;
  std::vector<double> step_losses;
  std::vector<double> epoch_losses;
};

using StepLogger = std::function<void(uint32_t epoch, uint64_t step, double loss)>;

// SGD training. Throws kDivergence on a non-finite loss.
TrainResult Train(GraphService& service, const TrainConfig& cfg, Objective objective,
                  size_t feature_arity, std::span<const VertexId> vertices,
                  const StepLogger& log = nullptr);

// Final hop-k_max embeddings of `vertices` under `model`, in batches of 512.
std::vector<Vector> EmbedAll(GraphService& service, const TrainConfig& cfg,
                             const GnnModel& model, std::span<const VertexId> vertices);

}  // namespace shardgnn

#endif  // SHARDGNN_GNN_H_
