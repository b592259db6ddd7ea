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

#include "shardgnn/skipgram.h"

#include <cmath>

#include "shardgnn/random.h"

namespace shardgnn {
namespace {

double Dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::kSchema, "vector lengths differ");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

double Softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

NsLoss SkipgramNsLoss(std::span<const double> center, std::span<const double> context,
                      const std::vector<std::span<const double>>& negatives) {
  const size_t d = center.size();
  NsLoss out;
  out.d_center.assign(d, 0.0);
  double pos = Dot(center, context);
  out.loss = Softplus(-pos);
  // d/dx softplus(-x) = sigmoid(x) - 1
  double g = Sigmoid(pos) - 1.0;
  out.d_context.resize(d);
  for (size_t i = 0; i < d; ++i) {
    out.d_center[i] += g * context[i];
    out.d_context[i] = g * center[i];
  }
  for (const auto& n : negatives) {
    double s = Dot(center, n);
    out.loss += Softplus(s);
    double gn = Sigmoid(s);
    Vector dn(d);
    for (size_t i = 0; i < d; ++i) {
      out.d_center[i] += gn * n[i];
      dn[i] = gn * center[i];
    }
    out.d_negatives.push_back(std::move(dn));
  }
  return out;
}

std::vector<std::vector<VertexId>> RandomWalks(GraphService& service,
                                               std::span<const VertexId> starts,
                                               const WalkConfig& cfg) {
  if (cfg.walk_len < 2) throw Error(ErrorCode::kUsage, "walk length must be > 1");
  std::vector<std::vector<VertexId>> walks;
  std::vector<ShardId> home;
  walks.reserve(starts.size() * cfg.walks_per_vertex);
  for (VertexId s : starts) {
    ShardId h = service.OwnerOf(s);
    for (uint32_t w = 0; w < cfg.walks_per_vertex; ++w) {
      walks.push_back({s});
      home.push_back(h);
    }
  }
  std::vector<size_t> active(walks.size());
  for (size_t i = 0; i < active.size(); ++i) active[i] = i;
  for (uint32_t t = 1; t < cfg.walk_len && !active.empty(); ++t) {
    std::vector<ExpandTask> tasks;
    tasks.reserve(active.size());
    for (size_t i : active) {
      VertexId start = walks[i].front();
      uint64_t w = i % cfg.walks_per_vertex;
      tasks.push_back({walks[i].back(), 1, MixSeed({cfg.seed, start, w, t}), home[i]});
    }
    auto results = service.Expand(tasks, cfg.edge_type);
    std::vector<size_t> still;
    for (size_t j = 0; j < active.size(); ++j) {
      if (results[j].padded) continue;
      walks[active[j]].push_back(results[j].ids.front());
      still.push_back(active[j]);
    }
    active = std::move(still);
  }
  return walks;
}

std::vector<std::pair<VertexId, VertexId>> WalkPairs(
    const std::vector<std::vector<VertexId>>& walks, uint32_t window) {
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (const auto& walk : walks) {
    const size_t len = walk.size();
    for (size_t i = 0; i < len; ++i) {
      for (size_t o = 1; o <= window; ++o) {
        if (i >= o) pairs.emplace_back(walk[i], walk[i - o]);
        if (i + o < len) pairs.emplace_back(walk[i], walk[i + o]);
      }
    }
  }
  return pairs;
}

std::vector<std::pair<VertexId, VertexId>> RandomWalkCorpus(GraphService& service,
                                                            std::span<const VertexId> starts,
                                                            const WalkConfig& cfg) {
  return WalkPairs(RandomWalks(service, starts, cfg), cfg.window);
}

}  // namespace shardgnn
