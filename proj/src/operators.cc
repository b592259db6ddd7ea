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

#include "shardgnn/operators.h"

#include <algorithm>
#include <cmath>
#include <mutex>

#include <fmt/format.h>

#include "shardgnn/random.h"

namespace shardgnn {

Matrix Matrix::Identity(size_t n) {
  Matrix m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::Uniform(size_t rows, size_t cols, double bound, uint64_t seed) {
  Matrix m(rows, cols);
  Rng rng(seed);
  for (double& x : m.data_) x = (2.0 * rng.Uniform() - 1.0) * bound;
  return m;
}

Vector Matrix::Apply(std::span<const double> x) const {
  Vector y(rows_, 0.0);
  for (size_t r = 0; r < rows_; ++r) {
    const double* row = data_.data() + r * cols_;
    double acc = 0.0;
    for (size_t c = 0; c < cols_; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
  return y;
}

Vector Matrix::ApplyTransposed(std::span<const double> y) const {
  Vector x(cols_, 0.0);
  for (size_t r = 0; r < rows_; ++r) {
    const double* row = data_.data() + r * cols_;
    for (size_t c = 0; c < cols_; ++c) x[c] += row[c] * y[r];
  }
  return x;
}

void Matrix::AddOuter(std::span<const double> y, std::span<const double> x, double scale) {
  for (size_t r = 0; r < rows_; ++r) {
    double* row = data_.data() + r * cols_;
    double s = scale * y[r];
    if (s == 0.0) continue;
    for (size_t c = 0; c < cols_; ++c) row[c] += s * x[c];
  }
}

std::string_view AggregateName(AggregateKind kind) {
  switch (kind) {
    case AggregateKind::kMean: return "mean";
    case AggregateKind::kWeightedMean: return "weighted-mean";
    case AggregateKind::kMaxPool: return "max-pool";
    case AggregateKind::kSum: return "sum";
  }
  return "unknown";
}

AggregateKind ParseAggregate(std::string_view name) {
  for (auto kind : {AggregateKind::kMean, AggregateKind::kWeightedMean, AggregateKind::kMaxPool,
                    AggregateKind::kSum}) {
    if (AggregateName(kind) == name) return kind;
  }
  throw Error(ErrorCode::kUsage, fmt::format("unknown aggregator '{}'", name));
}

std::string_view CombineName(CombineKind kind) {
  return kind == CombineKind::kConcatDense ? "concat-dense" : "sum-dense";
}

CombineKind ParseCombine(std::string_view name) {
  if (name == "concat-dense") return CombineKind::kConcatDense;
  if (name == "sum-dense") return CombineKind::kSumDense;
  throw Error(ErrorCode::kUsage, fmt::format("unknown combine '{}'", name));
}

OperatorSpec OperatorSpec::Init(size_t d, AggregateKind aggregate, CombineKind combine,
                                Activation activation, uint64_t seed) {
  if (d == 0) throw Error(ErrorCode::kUsage, "dimension must be >= 1");
  OperatorSpec spec;
  spec.d = d;
  spec.aggregate = aggregate;
  spec.combine = combine;
  spec.activation = activation;
  const double bound = 1.0 / std::sqrt(static_cast<double>(d));
  size_t in = combine == CombineKind::kConcatDense ? 2 * d : d;
  spec.w = Matrix::Uniform(d, in, bound, MixSeed({seed, 1}));
  if (aggregate == AggregateKind::kMaxPool) {
    spec.pool_w = Matrix::Uniform(d, d, bound, MixSeed({seed, 2}));
    Matrix b = Matrix::Uniform(1, d, bound, MixSeed({seed, 3}));
    spec.pool_b = b.data();
  }
  return spec;
}

void OperatorSpec::Validate() const {
  size_t in = combine == CombineKind::kConcatDense ? 2 * d : d;
  if (w.rows() != d || w.cols() != in) {
    throw Error(ErrorCode::kSchema,
                fmt::format("{} expects a {}x{} weight, got {}x{}", CombineName(combine), d, in,
                            w.rows(), w.cols()));
  }
  if (aggregate == AggregateKind::kMaxPool &&
      (pool_w.rows() != d || pool_w.cols() != d || pool_b.size() != d)) {
    throw Error(ErrorCode::kSchema, "max-pool transform must be dxd with a length-d bias");
  }
}

OperatorGrads::OperatorGrads(const OperatorSpec& spec)
    : w(spec.w.rows(), spec.w.cols()),
      pool_w(spec.pool_w.rows(), spec.pool_w.cols()),
      pool_b(spec.pool_b.size(), 0.0) {}

Vector Aggregate(const OperatorSpec& spec, const std::vector<std::span<const double>>& inputs,
                 std::span<const double> weights, AggregateTape* tape) {
  if (inputs.empty()) throw Error(ErrorCode::kEmptyNeighborhood, "nothing to aggregate");
  const size_t d = spec.d;
  for (const auto& x : inputs) {
    if (x.size() != d) {
      throw Error(ErrorCode::kSchema,
                  fmt::format("aggregate input has length {}, expected {}", x.size(), d));
    }
  }
  const size_t n = inputs.size();
  if (tape) {
    *tape = AggregateTape{};
    tape->saved = true;
    for (const auto& x : inputs) tape->inputs.emplace_back(x.begin(), x.end());
  }
  Vector out(d, 0.0);
  switch (spec.aggregate) {
    case AggregateKind::kSum:
    case AggregateKind::kMean: {
      for (const auto& x : inputs) {
        for (size_t i = 0; i < d; ++i) out[i] += x[i];
      }
      if (spec.aggregate == AggregateKind::kMean) {
        for (double& o : out) o /= static_cast<double>(n);
      }
      break;
    }
    case AggregateKind::kWeightedMean: {
      if (weights.size() != n) {
        throw Error(ErrorCode::kSchema, "weighted mean needs one weight per input");
      }
      double total = 0.0;
      for (double w : weights) total += w;
      std::vector<double> coef(n);
      for (size_t u = 0; u < n; ++u) {
        coef[u] = total > 0 ? weights[u] / total : 1.0 / static_cast<double>(n);
      }
      for (size_t u = 0; u < n; ++u) {
        for (size_t i = 0; i < d; ++i) out[i] += coef[u] * inputs[u][i];
      }
      if (tape) {
        tape->weights = std::move(coef);
        tape->weight_sum = total;
      }
      break;
    }
    case AggregateKind::kMaxPool: {
      std::vector<Vector> pooled(n);
      for (size_t u = 0; u < n; ++u) {
        pooled[u] = spec.pool_w.Apply(inputs[u]);
        for (size_t i = 0; i < d; ++i) pooled[u][i] = std::max(0.0, pooled[u][i] + spec.pool_b[i]);
      }
      std::vector<size_t> argmax(d, 0);
      for (size_t i = 0; i < d; ++i) {
        for (size_t u = 1; u < n; ++u) {
          if (pooled[u][i] > pooled[argmax[i]][i]) argmax[i] = u;
        }
        out[i] = pooled[argmax[i]][i];
      }
      if (tape) {
        tape->pooled = std::move(pooled);
        tape->argmax = std::move(argmax);
      }
      break;
    }
  }
  return out;
}

std::vector<Vector> AggregateBackward(const OperatorSpec& spec, const AggregateTape& tape,
                                      std::span<const double> upstream, OperatorGrads* grads) {
  if (!tape.saved) throw Error(ErrorCode::kStateMissing, "aggregate forward was not taped");
  const size_t d = spec.d;
  const size_t n = tape.inputs.size();
  std::vector<Vector> out(n, Vector(d, 0.0));
  switch (spec.aggregate) {
    case AggregateKind::kSum:
      for (auto& g : out) g.assign(upstream.begin(), upstream.end());
      break;
    case AggregateKind::kMean:
      for (auto& g : out) {
        for (size_t i = 0; i < d; ++i) g[i] = upstream[i] / static_cast<double>(n);
      }
      break;
    case AggregateKind::kWeightedMean:
      for (size_t u = 0; u < n; ++u) {
        for (size_t i = 0; i < d; ++i) out[u][i] = tape.weights[u] * upstream[i];
      }
      break;
    case AggregateKind::kMaxPool: {
      // Gradient of the winning pooled coordinate, then through relu(P x + b).
      std::vector<Vector> dz(n, Vector(d, 0.0));
      for (size_t i = 0; i < d; ++i) {
        size_t u = tape.argmax[i];
        if (tape.pooled[u][i] > 0) dz[u][i] += upstream[i];
      }
      for (size_t u = 0; u < n; ++u) {
        out[u] = spec.pool_w.ApplyTransposed(dz[u]);
        if (grads) {
          grads->pool_w.AddOuter(dz[u], tape.inputs[u]);
          for (size_t i = 0; i < d; ++i) grads->pool_b[i] += dz[u][i];
        }
      }
      break;
    }
  }
  return out;
}

Vector Combine(const OperatorSpec& spec, std::span<const double> h_prev,
               std::span<const double> h_agg, CombineTape* tape) {
  spec.Validate();
  if (h_prev.size() != spec.d || h_agg.size() != spec.d) {
    throw Error(ErrorCode::kSchema, "combine inputs must have length d");
  }
  Vector input;
  if (spec.combine == CombineKind::kConcatDense) {
    input.assign(h_prev.begin(), h_prev.end());
    input.insert(input.end(), h_agg.begin(), h_agg.end());
  } else {
    input.resize(spec.d);
    for (size_t i = 0; i < spec.d; ++i) input[i] = h_prev[i] + h_agg[i];
  }
  Vector pre = spec.w.Apply(input);
  Vector out = pre;
  if (spec.activation == Activation::kRelu) {
    for (double& x : out) x = std::max(0.0, x);
  }
  if (tape) {
    tape->saved = true;
    tape->input = std::move(input);
    tape->pre = std::move(pre);
  }
  return out;
}

std::pair<Vector, Vector> CombineBackward(const OperatorSpec& spec, const CombineTape& tape,
                                          std::span<const double> upstream,
                                          OperatorGrads* grads) {
  if (!tape.saved) throw Error(ErrorCode::kStateMissing, "combine forward was not taped");
  const size_t d = spec.d;
  Vector dz(upstream.begin(), upstream.end());
  if (spec.activation == Activation::kRelu) {
    for (size_t i = 0; i < d; ++i) {
      if (!(tape.pre[i] > 0)) dz[i] = 0.0;
    }
  }
  if (grads) grads->w.AddOuter(dz, tape.input);
  Vector din = spec.w.ApplyTransposed(dz);
  if (spec.combine == CombineKind::kConcatDense) {
    return {Vector(din.begin(), din.begin() + d), Vector(din.begin() + d, din.end())};
  }
  return {din, din};
}

Vector L2Normalize(std::span<const double> x) {
  double sq = 0.0;
  for (double v : x) sq += v * v;
  Vector out(x.begin(), x.end());
  if (sq == 0.0) return out;
  double inv = 1.0 / std::sqrt(sq);
  for (double& v : out) v *= inv;
  return out;
}

Vector L2NormalizeBackward(std::span<const double> x, std::span<const double> upstream) {
  double sq = 0.0;
  for (double v : x) sq += v * v;
  Vector out(x.size(), 0.0);
  if (sq == 0.0) return out;
  // d(x/|x|) = (I - y y^T) / |x|, y = x/|x|.
  double norm = std::sqrt(sq);
  double dot = 0.0;
  for (size_t i = 0; i < x.size(); ++i) dot += x[i] * upstream[i];
  for (size_t i = 0; i < x.size(); ++i) {
    out[i] = (upstream[i] - x[i] * dot / sq) / norm;
  }
  return out;
}

void EmbeddingStore::CheckHop(uint32_t k) const {
  if (k > k_max_) {
    throw Error(ErrorCode::kUsage, fmt::format("hop {} beyond k_max {}", k, k_max_));
  }
}

bool EmbeddingStore::Current(const Slot& slot, uint32_t k) const {
  return slot.value && (k == 0 || slot.epoch == epoch_);
}

std::shared_ptr<const Vector> EmbeddingStore::Get(VertexId v, uint32_t k) const {
  CheckHop(k);
  std::shared_lock lock(mu_);
  auto it = slots_.find(v);
  if (it == slots_.end()) return nullptr;
  const Slot& slot = it->second[k];
  return Current(slot, k) ? slot.value : nullptr;
}

std::shared_ptr<const Vector> EmbeddingStore::Insert(VertexId v, uint32_t k, Vector value) {
  CheckHop(k);
  std::unique_lock lock(mu_);
  auto& slots = slots_[v];
  if (slots.empty()) slots.resize(k_max_ + 1);
  Slot& slot = slots[k];
  if (Current(slot, k)) return slot.value;
  slot.value = std::make_shared<const Vector>(std::move(value));
  slot.epoch = epoch_;
  ++slot.version;
  return slot.value;
}

void EmbeddingStore::Put(VertexId v, uint32_t k, Vector value) {
  CheckHop(k);
  std::unique_lock lock(mu_);
  auto& slots = slots_[v];
  if (slots.empty()) slots.resize(k_max_ + 1);
  Slot& slot = slots[k];
  slot.value = std::make_shared<const Vector>(std::move(value));
  slot.epoch = epoch_;
  ++slot.version;
}

uint64_t EmbeddingStore::Version(VertexId v, uint32_t k) const {
  CheckHop(k);
  std::shared_lock lock(mu_);
  auto it = slots_.find(v);
  return it == slots_.end() ? 0 : it->second[k].version;
}

void EmbeddingStore::BumpEpoch() {
  std::unique_lock lock(mu_);
  ++epoch_;
}

uint64_t EmbeddingStore::epoch() const {
  std::shared_lock lock(mu_);
  return epoch_;
}

std::vector<std::pair<VertexId, std::shared_ptr<const Vector>>> EmbeddingStore::Entries(
    uint32_t k) const {
  CheckHop(k);
  std::shared_lock lock(mu_);
  std::vector<std::pair<VertexId, std::shared_ptr<const Vector>>> out;
  for (const auto& [v, slots] : slots_) {
    if (Current(slots[k], k)) out.emplace_back(v, slots[k].value);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

void NormalizeAll(EmbeddingStore& store, uint32_t k) {
  for (const auto& [v, value] : store.Entries(k)) store.Put(v, k, L2Normalize(*value));
}

std::shared_ptr<const Vector> MemoizedForward(EmbeddingStore& store, VertexId v, uint32_t k,
                                              std::span<const OperatorSpec> layers,
                                              const NeighborProvider& neighbors, bool memoize,
                                              ForwardStats& stats, ForwardTape* tape) {
  if (tape && !memoize) throw Error(ErrorCode::kUsage, "taping needs memoization");
  if (k == 0) {
    auto x = store.Get(v, 0);
    if (!x) throw Error(ErrorCode::kFeatureMissing, fmt::format("no features for vertex {}", v));
    return x;
  }
  if (k > layers.size()) throw Error(ErrorCode::kUsage, "not enough layers for this hop");
  if (memoize) {
    if (auto hit = store.Get(v, k)) {
      ++stats.reused;
      return hit;
    }
  }
  auto prev = MemoizedForward(store, v, k - 1, layers, neighbors, memoize, stats, tape);
  const SampledNeighbors& sample = neighbors(v, k);
  std::vector<std::shared_ptr<const Vector>> held;
  std::vector<std::span<const double>> inputs;
  held.reserve(sample.ids.size());
  for (VertexId u : sample.ids) {
    held.push_back(MemoizedForward(store, u, k - 1, layers, neighbors, memoize, stats, tape));
    inputs.emplace_back(*held.back());
  }
  const OperatorSpec& spec = layers[k - 1];
  ForwardNode node;
  Vector agg = Aggregate(spec, inputs, sample.weights, tape ? &node.aggregate : nullptr);
  Vector combined = Combine(spec, *prev, agg, tape ? &node.combine : nullptr);
  Vector out = L2Normalize(combined);
  ++stats.computed;
  ++stats.aggregate_evals;
  if (!memoize) return std::make_shared<const Vector>(std::move(out));
  auto stored = store.Insert(v, k, std::move(out));
  if (tape) {
    node.v = v;
    node.k = k;
    node.neighbors = sample.ids;
    node.combined = std::move(combined);
    tape->nodes.push_back(std::move(node));
  }
  return stored;
}

}  // namespace shardgnn
