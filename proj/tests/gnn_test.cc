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

#include <cmath>
#include <set>

#include "oracles.h"
#include "shardgnn/gatne.h"
#include "shardgnn/generators.h"
#include "shardgnn/gnn.h"
#include "shardgnn/hierarchy.h"
#include "shardgnn/partitioner.h"
#include "shardgnn/random.h"
#include "shardgnn/skipgram.h"
#include "test_util.h"

namespace shardgnn {
namespace {

using testing::MakeGraph;

struct Built {
  PartitionResult parts;
  std::unique_ptr<GraphService> service;
};

Built Serve(const GraphData& g, ShardId shards) {
  PartitionPlan plan;
  plan.shards = shards;
  Built b{Partition(g, plan), nullptr};
  SamplerOptions opts;
  opts.buckets_per_shard = 1;
  b.service = std::make_unique<GraphService>(b.parts.shards, opts);
  return b;
}

TEST(Skipgram, ZeroVectors) {
  Vector z(4, 0.0);
  std::vector<std::span<const double>> negs(3, std::span<const double>(z));
  auto ns = SkipgramNsLoss(z, z, negs);
  EXPECT_NEAR(ns.loss, 4 * std::log(2.0), 1e-12);
}

TEST(Skipgram, AlignedPairHasNearZeroLoss) {
  Vector c{30, 0}, n{-30, 0};
  std::vector<std::span<const double>> negs{n};
  auto ns = SkipgramNsLoss(c, c, negs);
  EXPECT_LT(ns.loss, 1e-12);
  EXPECT_TRUE(std::isfinite(SkipgramNsLoss(Vector{1e4}, Vector{-1e4}, {}).loss));
}

TEST(Skipgram, Gradients) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    EXPECT_LT(oracles::SkipgramGradError(seed), 1e-4) << seed;
  }
}

TEST(Walks, PairsInsideWindow) {
  std::vector<std::vector<VertexId>> walks{{10, 11, 12}};
  using P = std::pair<VertexId, VertexId>;
  EXPECT_EQ(WalkPairs(walks, 1), (std::vector<P>{{10, 11}, {11, 10}, {11, 12}, {12, 11}}));
  auto all = WalkPairs(walks, 5);
  EXPECT_EQ(all.size(), 6u);
  EXPECT_EQ(std::set<P>(all.begin(), all.end()).size(), 6u);
}

TEST(Walks, FollowEdgesAndStopAtDeadEnds) {
  auto g = MakeGraph(30, testing::RandomEdges(30, 60, 5));
  auto b = Serve(g, 3);
  auto adj = testing::Adjacency(30, testing::RandomEdges(30, 60, 5));
  std::vector<VertexId> starts{0, 1, 2, 3, 4, 5};
  WalkConfig cfg;
  cfg.walk_len = 8;
  cfg.walks_per_vertex = 3;
  cfg.seed = 11;
  auto walks = RandomWalks(*b.service, starts, cfg);
  ASSERT_EQ(walks.size(), starts.size() * 3);
  for (size_t w = 0; w < walks.size(); ++w) {
    const auto& walk = walks[w];
    EXPECT_EQ(walk.front(), starts[w / 3]);
    EXPECT_LE(walk.size(), 8u);
    for (size_t i = 1; i < walk.size(); ++i) {
      const auto& out = adj[walk[i - 1]];
      EXPECT_NE(std::find(out.begin(), out.end(), walk[i]), out.end());
    }
    if (walk.size() < 8) {
      EXPECT_TRUE(adj[walk.back()].empty());
    }
  }
  EXPECT_EQ(walks, RandomWalks(*Serve(g, 1).service, starts, cfg));
}

TEST(Gatne, NoMixingGivesBaseEmbedding) {
  auto inst = oracles::RandomGatne(1);
  inst.type.alpha = 0;
  inst.type.beta = 0;
  EXPECT_EQ(GatneEmbedding(inst.vertex, inst.type, inst.attr_transform), inst.vertex.b);
}

TEST(Gatne, OneHotCoefficientSelectsBlock) {
  GatneVertex v{Vector{1, 1}, Matrix(2, 3), Vector{}};
  for (size_t r = 0; r < 2; ++r) {
    for (size_t c = 0; c < 3; ++c) v.g(r, c) = double(10 * r + c);
  }
  GatneEdgeType t{Matrix::Identity(2), Vector{0, 1, 0}, 1.0, 0.0};
  EXPECT_EQ(GatneEmbedding(v, t, Matrix(0, 2)), (Vector{2, 12}));
}

TEST(Gatne, MatchesOracle) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    auto inst = oracles::RandomGatne(seed);
    auto got = GatneEmbedding(inst.vertex, inst.type, inst.attr_transform);
    EXPECT_LT(oracles::MaxAbsDiff(got, oracles::GatneOracle(inst)), 1e-12) << seed;
  }
}

TEST(Gatne, LinearInMixingScalars) {
  auto inst = oracles::RandomGatne(7);
  auto at = [&](double alpha, double beta) {
    auto t = inst.type;
    t.alpha = alpha;
    t.beta = beta;
    return GatneEmbedding(inst.vertex, t, inst.attr_transform);
  };
  auto h0 = at(0, 0), ha = at(1, 0), hb = at(0, 1), hab = at(2, 3);
  for (size_t i = 0; i < h0.size(); ++i) {
    EXPECT_NEAR(hab[i], h0[i] + 2 * (ha[i] - h0[i]) + 3 * (hb[i] - h0[i]), 1e-12);
  }
}

TEST(Gatne, ConcatenationAndShapes) {
  auto inst = oracles::RandomGatne(3);
  auto other = inst.type;
  other.alpha = 0.25;
  std::vector<GatneEdgeType> types{inst.type, other};
  auto cat = GatneConcatenated(inst.vertex, types, inst.attr_transform);
  auto h1 = GatneEmbedding(inst.vertex, inst.type, inst.attr_transform);
  auto h2 = GatneEmbedding(inst.vertex, other, inst.attr_transform);
  ASSERT_EQ(cat.size(), h1.size() + h2.size());
  EXPECT_TRUE(std::equal(h1.begin(), h1.end(), cat.begin()));
  EXPECT_TRUE(std::equal(h2.begin(), h2.end(), cat.begin() + h1.size()));
  auto bad = inst.type;
  bad.a.push_back(1);
  try {
    GatneEmbedding(inst.vertex, bad, inst.attr_transform);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchema);
  }
  auto u = UniformCoefficients(4);
  for (double x : u) EXPECT_EQ(x, 0.25);
}

TEST(Coarsen, IdentityAssignment) {
  auto inst = oracles::RandomCoarsen(2);
  size_t n = inst.a.rows();
  auto r = Coarsen(inst.a, Matrix::Identity(n), inst.z);
  EXPECT_EQ(oracles::MaxAbsDiff(r.a, inst.a), 0.0);
  EXPECT_EQ(oracles::MaxAbsDiff(r.x, inst.z), 0.0);
}

TEST(Coarsen, SingleClusterSumsEverything) {
  auto inst = oracles::RandomCoarsen(4);
  size_t n = inst.a.rows();
  Matrix ones(n, 1);
  for (auto& x : ones.data()) x = 1;
  auto r = Coarsen(inst.a, ones, inst.z);
  double total = 0;
  for (double x : inst.a.data()) total += x;
  EXPECT_NEAR(r.a(0, 0), total, 1e-12);
  for (size_t c = 0; c < inst.z.cols(); ++c) {
    double col = 0;
    for (size_t i = 0; i < n; ++i) col += inst.z(i, c);
    EXPECT_NEAR(r.x(0, c), col, 1e-12);
  }
}

TEST(Coarsen, KeepsSymmetryAndMass) {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    auto inst = oracles::RandomCoarsen(seed);
    auto r = Coarsen(inst.a, inst.s, inst.z);
    double before = 0, after = 0;
    for (double x : inst.a.data()) before += x;
    for (double x : r.a.data()) after += x;
    EXPECT_NEAR(before, after, 1e-9);
    for (size_t i = 0; i < r.a.rows(); ++i) {
      for (size_t j = 0; j < i; ++j) EXPECT_NEAR(r.a(i, j), r.a(j, i), 1e-12);
    }
  }
}

TEST(Coarsen, MatchesOracle) {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    auto inst = oracles::RandomCoarsen(seed);
    auto got = Coarsen(inst.a, inst.s, inst.z);
    auto want = oracles::CoarsenOracle(inst);
    EXPECT_LT(oracles::MaxAbsDiff(got.a, want.a), 1e-12) << seed;
    EXPECT_LT(oracles::MaxAbsDiff(got.x, want.x), 1e-12) << seed;
  }
}

TEST(Coarsen, RejectsNonStochasticAssignment) {
  auto inst = oracles::RandomCoarsen(5);
  inst.s(0, 0) += 0.1;
  try {
    Coarsen(inst.a, inst.s, inst.z);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchema);
  }
  EXPECT_THROW(Coarsen(inst.a, Matrix::Identity(2), inst.z), Error);
}

TEST(SpectralAssignment, SeparatesDisjointCliques) {
  const size_t n = 12;
  Matrix a(n, n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i != j && (i < 6) == (j < 6)) a(i, j) = 1;
    }
  }
  Matrix s = SpectralAssignment(a, 2, 1);
  ASSERT_EQ(s.rows(), n);
  ASSERT_EQ(s.cols(), 2u);
  for (size_t i = 0; i < n; ++i) {
    EXPECT_EQ(s(i, 0) + s(i, 1), 1.0);
    EXPECT_EQ(s(i, 0), s(i < 6 ? 0 : 6, 0));
  }
  EXPECT_NE(s(0, 0), s(6, 0));
  EXPECT_NO_THROW(Coarsen(a, s, Matrix::Identity(n)));
}

TEST(Runtime, SingleHopByHand) {
  GraphData g(2, 0);
  g.vertex_types().Intern("v");
  g.edge_types().Intern("e");
  g.AddVertex(0, VertexType{0}, Vector{1, 0});
  g.AddVertex(1, VertexType{0}, Vector{0, 2});
  g.AddEdge(0, 1, EdgeType{0}, 1.0);
  auto b = Serve(g, 2);
  TrainConfig cfg;
  cfg.d = 2;
  cfg.k_max = 1;
  cfg.hop_nums = {3};
  auto model = GnnModel::Init(cfg, 2);
  EXPECT_TRUE(model.projection.empty());
  model.layers[0].w = Matrix::Identity(2);
  model.layers[0].activation = Activation::kRelu;
  GnnRuntime rt(*b.service, cfg, model);
  std::vector<VertexId> batch{0, 1};
  auto out = rt.Embed(batch, 3);
  // normalize(x0 + mean(x1, x1, x1)); vertex 1 has no out-edges and
  // aggregates itself.
  EXPECT_NEAR(out[0][0], 1 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(out[0][1], 2 / std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(out[1][0], 0, 1e-15);
  EXPECT_NEAR(out[1][1], 1, 1e-15);
}

GraphData SmallAttributed(uint64_t seed) {
  SyntheticSpec spec;
  spec.model = GraphModel::kErdosRenyi;
  spec.n = 40;
  spec.m = 120;
  spec.seed = seed;
  spec.vertex_arity = 6;
  return Generate(spec);
}

TEST(Runtime, ShardCountDoesNotChangeEmbeddings) {
  auto g = SmallAttributed(1);
  TrainConfig cfg;
  cfg.d = 8;
  cfg.hop_nums = {4, 3};
  auto model = GnnModel::Init(cfg, 6);
  auto batch = g.AllVertexIds();
  auto one = Serve(g, 1);
  auto base = EmbedAll(*one.service, cfg, model, batch);
  for (ShardId p : {2u, 4u}) {
    auto many = Serve(g, p);
    auto got = EmbedAll(*many.service, cfg, model, batch);
    for (size_t i = 0; i < batch.size(); ++i) {
      EXPECT_LT(oracles::MaxAbsDiff(got[i], base[i]), 1e-12) << p << " " << i;
    }
  }
}

TEST(Runtime, FullNeighborhoodMatchesDenseOracle) {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    auto g = SmallAttributed(seed);
    TrainConfig cfg;
    cfg.d = 5;
    cfg.full_neighborhood = true;
    const AggregateKind kinds[] = {AggregateKind::kMean, AggregateKind::kWeightedMean,
                                   AggregateKind::kMaxPool, AggregateKind::kSum};
    cfg.aggregate = kinds[seed % 4];
    cfg.combine = seed % 2 ? CombineKind::kConcatDense : CombineKind::kSumDense;
    auto model = GnnModel::Init(cfg, 6);
    auto b = Serve(g, 3);
    auto batch = g.AllVertexIds();
    auto got = EmbedAll(*b.service, cfg, model, batch);
    auto want = oracles::DenseForward(g, model, cfg, batch);
    for (size_t i = 0; i < batch.size(); ++i) {
      EXPECT_LT(oracles::MaxAbsDiff(got[i], want[i]), 1e-12) << seed << " " << i;
    }
  }
}

TEST(Runtime, MemoizationDoesNotChangeOutputs) {
  auto g = SmallAttributed(9);
  auto b = Serve(g, 2);
  TrainConfig cfg;
  cfg.d = 6;
  GnnRuntime rt(*b.service, cfg, GnnModel::Init(cfg, 6));
  auto batch = g.AllVertexIds();
  auto plan = rt.Plan(batch, 5);
  ForwardStats on, off;
  auto a = rt.Forward(batch, plan, true, &on);
  auto c = rt.Forward(batch, plan, false, &off);
  EXPECT_EQ(a, c);
  EXPECT_LT(on.aggregate_evals, off.aggregate_evals);
  ForwardTape tape;
  EXPECT_THROW(rt.Forward(batch, plan, false, nullptr, &tape), Error);
}

TEST(Runtime, EndToEndGradients) {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_LT(oracles::GnnGradError(seed), 1e-4) << seed;
  }
}

GraphData Sbm(uint64_t n, uint64_t seed) {
  SyntheticSpec spec;
  spec.model = GraphModel::kSbm;
  spec.n = n;
  spec.p_in = 0.2;
  spec.p_out = 0.01;
  spec.seed = seed;
  spec.vertex_arity = 4;
  return Generate(spec);
}

TEST(Train, ZeroLearningRateKeepsParameters) {
  auto g = Sbm(40, 1);
  auto b = Serve(g, 2);
  TrainConfig cfg;
  cfg.d = 4;
  cfg.lr = 0;
  cfg.epochs = 1;
  cfg.walks_per_vertex = 1;
  auto ids = g.AllVertexIds();
  auto r = Train(*b.service, cfg, Objective::kSkipgram, 4, ids);
  auto init = GnnModel::Init(cfg, 4);
  for (size_t l = 0; l < init.layers.size(); ++l) {
    EXPECT_EQ(r.model.layers[l].w.data(), init.layers[l].w.data());
  }
  EXPECT_FALSE(r.step_losses.empty());
}

TEST(Train, LossDecreasesOnBlockGraph) {
  auto g = Sbm(60, 2);
  auto b = Serve(g, 2);
  TrainConfig cfg;
  cfg.d = 8;
  cfg.epochs = 4;
  cfg.lr = 0.5;
  cfg.walks_per_vertex = 2;
  cfg.batch_size = 32;
  auto ids = g.AllVertexIds();
  uint64_t logged = 0;
  auto r = Train(*b.service, cfg, Objective::kSkipgram, 4, ids,
                 [&](uint32_t, uint64_t, double) { ++logged; });
  ASSERT_EQ(r.epoch_losses.size(), 4u);
  EXPECT_EQ(logged, r.step_losses.size());
  EXPECT_LT(r.epoch_losses.back(), r.epoch_losses.front());
}

TEST(Train, SupervisedObjectiveRuns) {
  auto g = Sbm(40, 3);
  auto b = Serve(g, 2);
  TrainConfig cfg;
  cfg.d = 4;
  cfg.epochs = 2;
  auto ids = g.AllVertexIds();
  auto r = Train(*b.service, cfg, Objective::kSupervisedLinkPred, 4, ids);
  EXPECT_EQ(r.epoch_losses.size(), 2u);
  for (double l : r.step_losses) EXPECT_TRUE(std::isfinite(l));
}

TEST(Train, HugeLearningRateDiverges) {
  auto g = Sbm(40, 4);
  auto b = Serve(g, 2);
  TrainConfig cfg;
  cfg.d = 4;
  cfg.lr = 1e308;
  cfg.epochs = 3;
  // ReLU can zero every unit and stall the run instead.
  cfg.activation = Activation::kIdentity;
  auto ids = g.AllVertexIds();
  try {
    Train(*b.service, cfg, Objective::kSkipgram, 4, ids);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDivergence);
  }
}

}  // namespace
}  // namespace shardgnn
