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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <thread>

#include "oracles.h"
#include "shardgnn/operators.h"
#include "shardgnn/random.h"

namespace shardgnn {
namespace {

using Spans = std::vector<std::span<const double>>;

OperatorSpec Spec(size_t d, AggregateKind agg, CombineKind comb = CombineKind::kSumDense,
                  Activation act = Activation::kRelu) {
  return OperatorSpec::Init(d, agg, comb, act, 1);
}

TEST(Aggregate, Examples) {
  Vector a{1, 3}, b{3, 5};
  EXPECT_EQ(Aggregate(Spec(2, AggregateKind::kMean), Spans{a, b}), (Vector{2, 4}));
  EXPECT_EQ(Aggregate(Spec(2, AggregateKind::kSum), Spans{a, b}), (Vector{4, 8}));
  Vector c{2, 2}, z{0, 0}, w{3, 1};
  EXPECT_EQ(Aggregate(Spec(2, AggregateKind::kWeightedMean), Spans{c, z}, w), (Vector{1.5, 1.5}));
  auto pool = Spec(2, AggregateKind::kMaxPool);
  pool.pool_w = Matrix::Identity(2);
  pool.pool_b = {0, 0};
  Vector p{1, 5}, q{4, 2};
  EXPECT_EQ(Aggregate(pool, Spans{p, q}), (Vector{4, 5}));
}

TEST(Aggregate, ZeroWeightSumFallsBackToMean) {
  Vector a{1, 3}, b{3, 5}, w{0, 0};
  EXPECT_EQ(Aggregate(Spec(2, AggregateKind::kWeightedMean), Spans{a, b}, w), (Vector{2, 4}));
}

TEST(Aggregate, Errors) {
  try {
    Aggregate(Spec(2, AggregateKind::kMean), Spans{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyNeighborhood);
  }
  Vector shortv{1};
  EXPECT_THROW(Aggregate(Spec(2, AggregateKind::kMean), Spans{shortv}), Error);
  AggregateTape empty;
  try {
    AggregateBackward(Spec(2, AggregateKind::kMean), empty, Vector{1, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kStateMissing);
  }
}

TEST(Aggregate, PermutationInvariant) {
  for (auto kind : {AggregateKind::kMean, AggregateKind::kWeightedMean, AggregateKind::kMaxPool,
                    AggregateKind::kSum}) {
    Rng rng(static_cast<int>(kind));
    auto spec = Spec(5, kind);
    std::vector<Vector> xs(7, Vector(5));
    std::vector<double> ws(7);
    for (auto& x : xs) {
      // Dyadic values keep every sum exact in any order.
      for (auto& v : x) v = double(rng.Below(64)) / 8 - 4;
    }
    for (auto& w : ws) w = double(1 + rng.Below(8)) / 4;
    Spans in(xs.begin(), xs.end());
    Vector base = Aggregate(spec, in, ws);
    std::vector<size_t> perm{0, 1, 2, 3, 4, 5, 6};
    for (int t = 0; t < 20; ++t) {
      for (size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.Below(i)]);
      Spans pin;
      std::vector<double> pw;
      for (size_t i : perm) {
        pin.emplace_back(xs[i]);
        pw.push_back(ws[i]);
      }
      Vector got = Aggregate(spec, pin, pw);
      for (size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], base[i], 1e-12);
    }
  }
}

TEST(Aggregate, MeanBackwardSplitsEvenly) {
  auto spec = Spec(2, AggregateKind::kMean);
  Vector a{1, 2}, b{3, 4}, c{5, 6};
  AggregateTape tape;
  Aggregate(spec, Spans{a, b, c}, {}, &tape);
  auto g = AggregateBackward(spec, tape, Vector{3, 6});
  for (const auto& gi : g) EXPECT_EQ(gi, (Vector{1, 2}));
}

TEST(Combine, Examples) {
  auto sum = Spec(2, AggregateKind::kMean, CombineKind::kSumDense);
  sum.w = Matrix::Identity(2);
  EXPECT_EQ(Combine(sum, Vector{1, 0}, Vector{0, 1}), (Vector{1, 1}));
  auto concat = Spec(2, AggregateKind::kMean, CombineKind::kConcatDense);
  concat.w = Matrix(2, 4);
  EXPECT_EQ(Combine(concat, Vector{1, 2}, Vector{3, 4}), (Vector{0, 0}));
}

TEST(Combine, InactiveReluPassesNoGradient) {
  auto spec = Spec(2, AggregateKind::kMean, CombineKind::kSumDense);
  spec.w = Matrix::Identity(2);
  CombineTape tape;
  Combine(spec, Vector{-1, -2}, Vector{-1, 0}, &tape);
  auto [dp, da] = CombineBackward(spec, tape, Vector{1, 1});
  EXPECT_EQ(dp, (Vector{0, 0}));
  EXPECT_EQ(da, (Vector{0, 0}));
}

TEST(Combine, MatchesDenseLayer) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    size_t d = 1 + rng.Below(8);
    auto kind = seed % 2 ? CombineKind::kConcatDense : CombineKind::kSumDense;
    auto spec = OperatorSpec::Init(d, AggregateKind::kMean, kind, Activation::kRelu, seed);
    Vector p(d), a(d);
    for (auto& x : p) x = rng.Normal();
    for (auto& x : a) x = rng.Normal();
    Vector got = Combine(spec, p, a);
    for (size_t r = 0; r < d; ++r) {
      double acc = 0;
      for (size_t c = 0; c < d; ++c) {
        if (kind == CombineKind::kConcatDense) {
          acc += spec.w(r, c) * p[c] + spec.w(r, d + c) * a[c];
        } else {
          acc += spec.w(r, c) * (p[c] + a[c]);
        }
      }
      EXPECT_NEAR(got[r], std::max(acc, 0.0), 1e-12);
    }
  }
}

TEST(Combine, ShapeMismatchIsSchemaError) {
  auto spec = Spec(3, AggregateKind::kMean, CombineKind::kConcatDense);
  spec.w = Matrix(3, 3);
  try {
    spec.Validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchema);
  }
  EXPECT_THROW(Combine(spec, Vector{1, 2, 3}, Vector{1, 2, 3}), Error);
}

TEST(OperatorSpec, InitBounds) {
  auto spec = OperatorSpec::Init(16, AggregateKind::kMaxPool, CombineKind::kConcatDense,
                                 Activation::kRelu, 3);
  EXPECT_EQ(spec.w.rows(), 16u);
  EXPECT_EQ(spec.w.cols(), 32u);
  for (double x : spec.w.data()) EXPECT_LE(std::abs(x), 0.25);
  EXPECT_EQ(spec.pool_b.size(), 16u);
}

TEST(Normalize, Examples) {
  Vector v = L2Normalize(Vector{3, 4});
  EXPECT_DOUBLE_EQ(v[0], 0.6);
  EXPECT_DOUBLE_EQ(v[1], 0.8);
  EXPECT_EQ(L2Normalize(Vector{0, 0}), (Vector{0, 0}));
}

TEST(Normalize, UnitNormAndIdempotent) {
  EmbeddingStore store(1);
  Rng rng(2);
  for (VertexId v = 0; v < 200; ++v) {
    Vector x(1 + rng.Below(10));
    for (auto& e : x) e = v % 17 == 0 ? 0.0 : rng.Normal() * 10;
    store.Insert(v, 1, x);
  }
  NormalizeAll(store, 1);
  for (const auto& [v, x] : store.Entries(1)) {
    double n = 0;
    for (double e : *x) n += e * e;
    EXPECT_TRUE(std::abs(std::sqrt(n) - 1) < 1e-9 || n == 0) << v;
    Vector again = L2Normalize(*x);
    for (size_t i = 0; i < again.size(); ++i) EXPECT_NEAR(again[i], (*x)[i], 1e-15);
  }
}

TEST(EmbeddingStore, FirstInsertWinsUntilEpochBump) {
  EmbeddingStore store(2);
  auto a = store.Insert(1, 1, Vector{1});
  auto b = store.Insert(1, 1, Vector{2});
  EXPECT_EQ(a, b);
  EXPECT_EQ((*store.Get(1, 1))[0], 1.0);
  store.Put(1, 0, Vector{5});
  store.BumpEpoch();
  EXPECT_EQ(store.Get(1, 1), nullptr);
  ASSERT_NE(store.Get(1, 0), nullptr);
  store.Insert(1, 1, Vector{3});
  EXPECT_EQ((*store.Get(1, 1))[0], 3.0);
  EXPECT_EQ(store.Version(1, 1), 2u);
  EXPECT_THROW(store.Get(1, 3), Error);
}

TEST(EmbeddingStore, ConcurrentInsertsKeepOneValue) {
  EmbeddingStore store(1);
  std::vector<std::thread> ts;
  for (int t = 0; t < 4; ++t) {
    ts.emplace_back([&store, t] {
      for (VertexId v = 0; v < 1000; ++v) store.Insert(v, 1, Vector{double(t)});
    });
  }
  for (auto& t : ts) t.join();
  auto entries = store.Entries(1);
  EXPECT_EQ(entries.size(), 1000u);
  for (const auto& [v, x] : entries) EXPECT_EQ(store.Version(v, 1), 1u);
}

struct Fixture {
  std::map<std::pair<VertexId, uint32_t>, SampledNeighbors> samples;
  NeighborProvider provider() {
    return [this](VertexId v, uint32_t k) -> const SampledNeighbors& {
      return samples.at({v, k});
    };
  }
};

TEST(Memoize, SharedNeighborComputedOnce) {
  // Batch {0, 1} both aggregate over 2 at hop 1.
  Fixture f;
  for (VertexId v : {0, 1, 2}) f.samples[{v, 1}] = {{2}, {1.0}};
  std::vector<OperatorSpec> layers{Spec(2, AggregateKind::kMean)};
  EmbeddingStore store(1);
  for (VertexId v : {0, 1, 2}) store.Put(v, 0, Vector{1.0 + v, 1.0});
  ForwardStats st;
  MemoizedForward(store, 2, 1, layers, f.provider(), true, st);
  MemoizedForward(store, 2, 1, layers, f.provider(), true, st);
  EXPECT_EQ(st.computed, 1u);
  EXPECT_EQ(st.reused, 1u);
}

TEST(Memoize, DisjointNeighborhoodsReuseNothing) {
  Fixture f;
  f.samples[{0, 1}] = {{1}, {1.0}};
  f.samples[{2, 1}] = {{3}, {1.0}};
  std::vector<OperatorSpec> layers{Spec(2, AggregateKind::kMean)};
  EmbeddingStore store(1);
  for (VertexId v = 0; v < 4; ++v) store.Put(v, 0, Vector{double(v), 1});
  ForwardStats st;
  MemoizedForward(store, 0, 1, layers, f.provider(), true, st);
  MemoizedForward(store, 2, 1, layers, f.provider(), true, st);
  EXPECT_EQ(st.reused, 0u);
  EXPECT_EQ(st.computed, 2u);
}

TEST(Memoize, CliqueEvaluationCounts) {
  // Clique of 16, k_max = 2, |S| = 5 samples per (v, k).
  const size_t s = 5;
  Fixture f;
  Rng rng(4);
  for (VertexId v = 0; v < 16; ++v) {
    for (uint32_t k = 1; k <= 2; ++k) {
      SampledNeighbors n;
      for (size_t i = 0; i < s; ++i) {
        VertexId u = rng.Below(15);
        n.ids.push_back(u >= v ? u + 1 : u);
        n.weights.push_back(1.0);
      }
      f.samples[{v, k}] = n;
    }
  }
  std::vector<OperatorSpec> layers{Spec(4, AggregateKind::kMean), Spec(4, AggregateKind::kMean)};
  auto run = [&](bool memoize, ForwardStats& st) {
    EmbeddingStore store(2);
    for (VertexId v = 0; v < 16; ++v) store.Put(v, 0, Vector{double(v), 1, -1, 0.5});
    std::vector<Vector> out;
    for (VertexId v = 0; v < 16; ++v) {
      out.push_back(*MemoizedForward(store, v, 2, layers, f.provider(), memoize, st));
    }
    return out;
  };
  ForwardStats on, off;
  auto a = run(true, on);
  auto b = run(false, off);
  EXPECT_EQ(on.aggregate_evals, 32u);
  // Without memoization every hop-2 vector recomputes its own hop-1 vector
  // and the hop-1 vectors of its |S| samples.
  EXPECT_EQ(off.aggregate_evals, 16u * (2 + s));
  EXPECT_EQ(a, b);
}

TEST(Memoize, MissingFeature) {
  Fixture f;
  f.samples[{0, 1}] = {{1}, {1.0}};
  std::vector<OperatorSpec> layers{Spec(2, AggregateKind::kMean)};
  EmbeddingStore store(1);
  store.Put(0, 0, Vector{1, 1});
  ForwardStats st;
  try {
    MemoizedForward(store, 0, 1, layers, f.provider(), true, st);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kFeatureMissing);
  }
}

TEST(Gradients, AggregateOperators) {
  for (auto kind : {AggregateKind::kMean, AggregateKind::kWeightedMean, AggregateKind::kMaxPool,
                    AggregateKind::kSum}) {
    for (uint64_t seed = 0; seed < 100; ++seed) {
      EXPECT_LT(oracles::AggregateGradError(kind, seed), 1e-4)
          << AggregateName(kind) << " seed " << seed;
    }
  }
}

TEST(Gradients, CombineOperators) {
  for (auto kind : {CombineKind::kConcatDense, CombineKind::kSumDense}) {
    for (auto act : {Activation::kRelu, Activation::kIdentity}) {
      for (uint64_t seed = 0; seed < 100; ++seed) {
        EXPECT_LT(oracles::CombineGradError(kind, act, seed), 1e-4)
            << CombineName(kind) << " seed " << seed;
      }
    }
  }
}

TEST(Gradients, Normalize) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    EXPECT_LT(oracles::NormalizeGradError(seed), 1e-4) << seed;
  }
}

}  // namespace
}  // namespace shardgnn
