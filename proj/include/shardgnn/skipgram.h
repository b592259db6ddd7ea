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

#ifndef SHARDGNN_SKIPGRAM_H_
#define SHARDGNN_SKIPGRAM_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "shardgnn/operators.h"
#include "shardgnn/sampling.h"

namespace shardgnn {

struct NsLoss {
  double loss = 0.0;
  Vector d_center;
  Vector d_context;
  std::vector<Vector> d_negatives;
};

// -log sigmoid(center . context) - sum_n log sigmoid(-center . n), with exact
// gradients.
NsLoss SkipgramNsLoss(std::span<const double> center, std::span<const double> context,
                      const std::vector<std::span<const double>>& negatives);

// log(1 + exp(x)) without overflow.
double Softplus(double x);

struct WalkConfig {
  EdgeType edge_type = kAnyEdgeType;
  uint32_t walk_len = 10;
  uint32_t walks_per_vertex = 5;
  uint32_t window = 2;
  uint64_t seed = 0;
};

// Weighted walks, walks_per_vertex from every start in order. Step t of walk
// w from s draws with seed MixSeed({seed, s, w, t}); a vertex without
// matching out-edges ends the walk.
std::vector<std::vector<VertexId>> RandomWalks(GraphService& service,
                                               std::span<const VertexId> starts,
                                               const WalkConfig& cfg);

// (center, context) pairs for every offset 1 <= |o| <= window inside each
// walk, by position, then distance, left before right.
std::vector<std::pair<VertexId, VertexId>> WalkPairs(
    const std::vector<std::vector<VertexId>>& walks, uint32_t window);

std::vector<std::pair<VertexId, VertexId>> RandomWalkCorpus(GraphService& service,
                                                            std::span<const VertexId> starts,
                                                            const WalkConfig& cfg);

}  // namespace shardgnn

#endif  // SHARDGNN_SKIPGRAM_H_
