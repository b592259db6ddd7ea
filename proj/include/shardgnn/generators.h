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

#ifndef SHARDGNN_GENERATORS_H_
#define SHARDGNN_GENERATORS_H_

#include <cstdint>
#include <string>
#include <string_view>

#include "shardgnn/graph_data.h"

namespace shardgnn {

enum class GraphModel { kPreferentialAttachment, kErdosRenyi, kSbm, kPath, kStar, kClique };

GraphModel ParseGraphModel(std::string_view name);
std::string_view GraphModelName(GraphModel model);

struct SyntheticSpec {
  GraphModel model = GraphModel::kPath;
  uint64_t n = 0;
  // Edge count for erdos-renyi; for preferential-attachment a nonzero value
  // stops growth at m edges instead of n vertices.
  uint64_t m = 0;
  // sbm edge probabilities within and across blocks.
  double p_in = 0.2;
  double p_out = 0.01;
  uint32_t communities = 2;
  // Directed preferential attachment: each step adds a new source (alpha),
  // an edge between existing vertices (beta) or a new target (gamma).
  // delta_in / delta_out are the degree offsets of target / source choice.
  double alpha = 0.41;
  double beta = 0.59;
  double gamma = 0.0;
  double delta_in = 0.5;
  double delta_out = 0.0;
  // Out-edges a new source attaches with (all to preferential targets).
  uint32_t source_fanout = 2;
  uint64_t seed = 0;
  size_t vertex_arity = 0;
  size_t edge_arity = 0;
  // 0: Gaussian attributes; otherwise attributes come from this many
  // distinct categorical code vectors.
  uint32_t attr_distinct = 0;
  uint32_t vertex_types = 1;
  uint32_t edge_types = 1;
};

// Vertices are 0..n-1 and all are declared. Throws kUsage on infeasible specs.
GraphData Generate(const SyntheticSpec& spec);

// Block of vertex `v` in an sbm graph: contiguous equal ranges.
inline uint32_t SbmBlock(uint64_t v, uint64_t n, uint32_t communities) {
  return static_cast<uint32_t>(v * communities / n);
}

}  // namespace shardgnn

#endif  // SHARDGNN_GENERATORS_H_
