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

#ifndef SHARDGNN_OPERATORS_H_
#define SHARDGNN_OPERATORS_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <shared_mutex>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "shardgnn/common.h"

namespace shardgnn {

using Vector = std::vector<double>;

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix Identity(size_t n);
  // Entries uniform in [-bound, bound].
  static Matrix Uniform(size_t rows, size_t cols, double bound, uint64_t seed);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }
  double& operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  // this * x
  Vector Apply(std::span<const double> x) const;
  // this^T * y
  Vector ApplyTransposed(std::span<const double> y) const;
  // this += scale * y x^T
  void AddOuter(std::span<const double> y, std::span<const double> x, double scale = 1.0);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<double> data_;
};

enum class AggregateKind { kMean, kWeightedMean, kMaxPool, kSum };
enum class CombineKind { kConcatDense, kSumDense };
enum class Activation { kRelu, kIdentity };

std::string_view AggregateName(AggregateKind kind);
AggregateKind ParseAggregate(std::string_view name);
std::string_view CombineName(CombineKind kind);
CombineKind ParseCombine(std::string_view name);

struct OperatorSpec {
  size_t d = 0;
  AggregateKind aggregate = AggregateKind::kMean;
  CombineKind combine = CombineKind::kSumDense;
  Activation activation = Activation::kRelu;
  Matrix w;       // d x 2d for concat-dense, d x d for sum-dense
  Matrix pool_w;  // d x d, max-pool only
  Vector pool_b;  // d, max-pool only

  // Parameters uniform in [-1/sqrt(d), 1/sqrt(d)].
  static OperatorSpec Init(size_t d, AggregateKind aggregate, CombineKind combine,
                           Activation activation, uint64_t seed);
  // Throws kSchema on inconsistent parameter shapes.
  void Validate() const;
};

// Gradients of the trainable parameters of one OperatorSpec.
struct OperatorGrads {
  Matrix w;
  Matrix pool_w;
  Vector pool_b;

  OperatorGrads() = default;
  explicit OperatorGrads(const OperatorSpec& spec);
};

// Inputs saved by a forward call for its backward.
struct AggregateTape {
  bool saved = false;
  std::vector<Vector> inputs;
  std::vector<double> weights;
  std::vector<Vector> pooled;    // relu(P x + b) per input, max-pool only
  std::vector<size_t> argmax;    // winning input per coordinate, max-pool only
  double weight_sum = 0.0;
};

struct CombineTape {
  bool saved = false;
  Vector input;  // [h_prev; h_agg] or h_prev + h_agg
  Vector pre;    // W * input, before the activation
};

// Throws kEmptyNeighborhood on no input, kSchema on length mismatch.
// `weights` is read by weighted-mean only (one per input); a zero weight sum
// falls back to the plain mean.
Vector Aggregate(const OperatorSpec& spec, const std::vector<std::span<const double>>& inputs,
                 std::span<const double> weights = {}, AggregateTape* tape = nullptr);

// Returns one gradient per input and accumulates parameter gradients into
// `grads` when given. Throws kStateMissing without a saved tape.
std::vector<Vector> AggregateBackward(const OperatorSpec& spec, const AggregateTape& tape,
                                      std::span<const double> upstream,
                                      OperatorGrads* grads = nullptr);

Vector Combine(const OperatorSpec& spec, std::span<const double> h_prev,
               std::span<const double> h_agg, CombineTape* tape = nullptr);

// Returns (d h_prev, d h_agg).
std::pair<Vector, Vector> CombineBackward(const OperatorSpec& spec, const CombineTape& tape,
                                          std::span<const double> upstream,
                                          OperatorGrads* grads = nullptr);

// Unit L2 norm; the zero vector maps to itself.
Vector L2Normalize(std::span<const double> x);
Vector L2NormalizeBackward(std::span<const double> x, std::span<const double> upstream);

// Per-(vertex, hop) vectors. Hop 0 holds input features and is written with
// Put. Hops >= 1 hold memoized intermediate vectors: the first Insert in an
// epoch wins and BumpEpoch invalidates them all. Safe for concurrent use.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(uint32_t k_max) : k_max_(k_max) {}

  uint32_t k_max() const { return k_max_; }

  // Current entry, or nullptr when absent or stale.
  std::shared_ptr<const Vector> Get(VertexId v, uint32_t k) const;
  // Stores `value` unless a current entry exists; returns the stored entry.
  std::shared_ptr<const Vector> Insert(VertexId v, uint32_t k, Vector value);
  // Unconditional write.
  void Put(VertexId v, uint32_t k, Vector value);
  // Write count of the entry; 0 if never written.
  uint64_t Version(VertexId v, uint32_t k) const;

  void BumpEpoch();
  uint64_t epoch() const;

  // Current entries at hop k, sorted by vertex.
  std::vector<std::pair<VertexId, std::shared_ptr<const Vector>>> Entries(uint32_t k) const;

 private:
  struct Slot {
    std::shared_ptr<const Vector> value;
    uint64_t epoch = 0;
    uint64_t version = 0;
  };
  void CheckHop(uint32_t k) const;
  bool Current(const Slot& slot, uint32_t k) const;

  uint32_t k_max_;
  mutable std::shared_mutex mu_;
  uint64_t epoch_ = 1;
  std::unordered_map<VertexId, std::vector<Slot>> slots_;
};

// Scales every current hop-k vector to unit norm.
void NormalizeAll(EmbeddingStore& store, uint32_t k);

struct SampledNeighbors {
  std::vector<VertexId> ids;
  std::vector<double> weights;
};

// S^(k)(v): the neighbors aggregated into hop-k vector of v.
using NeighborProvider = std::function<const SampledNeighbors&(VertexId v, uint32_t k)>;

struct ForwardStats {
  uint64_t computed = 0;         // hop >= 1 vectors evaluated
  uint64_t reused = 0;           // hop >= 1 vectors taken from the store
  uint64_t aggregate_evals = 0;  // equals computed
};

// One evaluated (v, k) vector with everything its backward needs.
struct ForwardNode {
  VertexId v = 0;
  uint32_t k = 0;
  std::vector<VertexId> neighbors;
  AggregateTape aggregate;
  CombineTape combine;
  Vector combined;  // before normalization
};

// Evaluation order of a memoized forward; children precede parents.
struct ForwardTape {
  std::vector<ForwardNode> nodes;
};

// h^(k)(v) = normalize(Combine_k(h^(k-1)(v), Aggregate_k(h^(k-1)(u), u in S^(k)(v)))),
// with layers[k-1] holding hop-k parameters. With `memoize`, each (v, k) is
// evaluated at most once per store epoch and later requests reuse it;
// without, every request recomputes its whole tree. A tape requires
// memoization. Throws kFeatureMissing when a hop-0 vector is absent.
std::shared_ptr<const Vector> MemoizedForward(EmbeddingStore& store, VertexId v, uint32_t k,
                                              std::span<const OperatorSpec> layers,
                                              const NeighborProvider& neighbors, bool memoize,
                                              ForwardStats& stats, ForwardTape* tape = nullptr);

}  // namespace shardgnn

#endif  // SHARDGNN_OPERATORS_H_
