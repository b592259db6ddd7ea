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

#include "shardgnn/generators.h"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <fmt/format.h>

#include "shardgnn/random.h"

namespace shardgnn {
namespace {

class AttributeSource {
 public:
  AttributeSource(size_t arity, uint32_t distinct, uint64_t seed)
      : arity_(arity), distinct_(distinct), rng_(seed), palette_rng_(MixSeed({seed, 1})) {
    if (distinct_ == 0) return;
    palette_.resize(static_cast<size_t>(distinct_) * arity_);
    for (uint32_t c = 0; c < distinct_; ++c) {
      // Codes are spread so the palette has `distinct` different vectors.
      for (size_t i = 0; i < arity_; ++i) {
        palette_[c * arity_ + i] = i == 0 ? c : static_cast<double>(palette_rng_.Below(16));
      }
    }
  }

  std::span<const double> Next() {
    if (distinct_ == 0) {
      buf_.resize(arity_);
      for (double& x : buf_) x = rng_.Normal();
      return buf_;
    }
    uint64_t c = rng_.Below(distinct_);
    return {palette_.data() + c * arity_, arity_};
  }

 private:
  size_t arity_;
  uint32_t distinct_;
  Rng rng_;
  Rng palette_rng_;
  std::vector<double> palette_;
  std::vector<double> buf_;
};

struct Builder {
  explicit Builder(const SyntheticSpec& spec)
      : spec(spec),
        graph(spec.vertex_arity, spec.edge_arity),
        vattr(spec.vertex_arity, spec.attr_distinct, MixSeed({spec.seed, 0x7661})),
        eattr(spec.edge_arity, spec.attr_distinct, MixSeed({spec.seed, 0x6561})),
        type_rng(MixSeed({spec.seed, 0x7479})) {
    for (uint32_t t = 0; t < std::max(1u, spec.vertex_types); ++t) {
      graph.vertex_types().Intern(fmt::format("v{}", t));
    }
    for (uint32_t t = 0; t < std::max(1u, spec.edge_types); ++t) {
      graph.edge_types().Intern(fmt::format("e{}", t));
    }
  }

  void Vertices(uint64_t n) {
    for (uint64_t v = 0; v < n; ++v) {
      auto t = static_cast<uint16_t>(v % std::max(1u, spec.vertex_types));
      graph.AddVertex(v, VertexType{t}, vattr.Next());
    }
  }

  void Edge(VertexId src, VertexId dst) {
    auto t = static_cast<uint16_t>(type_rng.Below(std::max(1u, spec.edge_types)));
    graph.AddEdge(src, dst, EdgeType{t}, 1.0, eattr.Next());
  }

  const SyntheticSpec& spec;
  GraphData graph;
  AttributeSource vattr;
  AttributeSource eattr;
  Rng type_rng;
};

// Directed preferential attachment with separate in/out attraction
// (Bollobas, Borgs, Chayes, Riordan 2003).
void PreferentialAttachment(const SyntheticSpec& spec, Builder& b) {
  if (spec.n < 3 && spec.m == 0) throw Error(ErrorCode::kUsage, "preferential attachment needs n >= 3");
  if (spec.alpha < 0 || spec.beta < 0 || spec.gamma < 0 ||
      std::abs(spec.alpha + spec.beta + spec.gamma - 1.0) > 1e-9 || spec.alpha + spec.gamma <= 0) {
    throw Error(ErrorCode::kUsage, "alpha, beta, gamma must be >= 0, sum to 1, and grow the graph");
  }
  if (spec.delta_in < 0 || spec.delta_out < 0) throw Error(ErrorCode::kUsage, "offsets must be >= 0");
  std::vector<VertexId> src{0, 1, 2};
  std::vector<VertexId> dst{1, 2, 0};
  std::vector<uint64_t> in_deg{1, 1, 1};
  std::vector<uint64_t> out_deg{1, 1, 1};
  std::unordered_set<uint64_t> seen;
  auto key = [](VertexId a, VertexId c) { return SplitMix64(a * 0x100000001b3ULL ^ c); };
  std::vector<std::pair<VertexId, VertexId>> pairs;
  for (size_t i = 0; i < 3; ++i) {
    seen.insert(key(src[i], dst[i]));
    pairs.emplace_back(src[i], dst[i]);
  }
  Rng rng(MixSeed({spec.seed, 0x7061}));
  // Draws a vertex with probability proportional to degree + delta, using a
  // uniform edge endpoint for the degree part.
  auto pick = [&](const std::vector<VertexId>& ends, double delta) -> VertexId {
    double edges = static_cast<double>(ends.size());
    double total = edges + delta * static_cast<double>(in_deg.size());
    if (rng.Uniform() * total < edges) return ends[rng.Below(ends.size())];
    return rng.Below(in_deg.size());
  };
  auto done = [&] {
    return spec.m ? pairs.size() >= spec.m : in_deg.size() >= spec.n;
  };
  uint64_t stalled = 0;
  while (!done()) {
    double u = rng.Uniform();
    VertexId a;
    VertexId c;
    bool grows_src = false;
    bool grows_dst = false;
    if (u < spec.alpha) {
      a = in_deg.size();
      c = pick(dst, spec.delta_in);
      grows_src = true;
    } else if (u < spec.alpha + spec.beta) {
      a = pick(src, spec.delta_out);
      c = pick(dst, spec.delta_in);
    } else {
      a = pick(src, spec.delta_out);
      c = in_deg.size();
      grows_dst = true;
    }
    if (a == c || !seen.insert(key(a, c)).second) {
      if (++stalled > 1000000) throw Error(ErrorCode::kUsage, "generator stalled");
      continue;
    }
    stalled = 0;
    if (grows_src || grows_dst) {
      in_deg.push_back(0);
      out_deg.push_back(0);
    }
    src.push_back(a);
    dst.push_back(c);
    ++out_deg[a];
    ++in_deg[c];
    pairs.emplace_back(a, c);
    // A new source brings source_fanout edges in total.
    for (uint32_t extra = 1; grows_src && extra < spec.source_fanout && !done(); ++extra) {
      VertexId t = pick(dst, spec.delta_in);
      for (int tries = 0; (t == a || seen.count(key(a, t))) && tries < 64; ++tries) {
        t = pick(dst, spec.delta_in);
      }
      if (t == a || !seen.insert(key(a, t)).second) break;
      src.push_back(a);
      dst.push_back(t);
      ++out_deg[a];
      ++in_deg[t];
      pairs.emplace_back(a, t);
    }
  }
  b.Vertices(in_deg.size());
  for (const auto& [a, c] : pairs) b.Edge(a, c);
}

void ErdosRenyi(const SyntheticSpec& spec, Builder& b) {
  const uint64_t n = spec.n;
  const uint64_t cap = n * (n > 0 ? n - 1 : 0);
  if (spec.m > cap) {
    throw Error(ErrorCode::kUsage, fmt::format("m={} exceeds n(n-1)={}", spec.m, cap));
  }
  b.Vertices(n);
  Rng rng(MixSeed({spec.seed, 0x6572}));
  if (spec.m * 2 > cap) {
    // Dense: partial shuffle of all ordered pairs.
    std::vector<std::pair<VertexId, VertexId>> all;
    for (VertexId a = 0; a < n; ++a) {
      for (VertexId c = 0; c < n; ++c) {
        if (a != c) all.emplace_back(a, c);
      }
    }
    for (uint64_t i = 0; i < spec.m; ++i) std::swap(all[i], all[i + rng.Below(all.size() - i)]);
    for (uint64_t i = 0; i < spec.m; ++i) b.Edge(all[i].first, all[i].second);
    return;
  }
  std::unordered_set<uint64_t> seen;
  uint64_t made = 0;
  while (made < spec.m) {
    VertexId a = rng.Below(n);
    VertexId c = rng.Below(n);
    if (a == c || !seen.insert(a * n + c).second) continue;
    b.Edge(a, c);
    ++made;
  }
}

void Sbm(const SyntheticSpec& spec, Builder& b) {
  if (spec.communities == 0 || spec.communities > spec.n) {
    throw Error(ErrorCode::kUsage, "need 1..n communities");
  }
  if (spec.p_in < 0 || spec.p_in > 1 || spec.p_out < 0 || spec.p_out > 1) {
    throw Error(ErrorCode::kUsage, "probabilities must lie in [0, 1]");
  }
  b.Vertices(spec.n);
  Rng rng(MixSeed({spec.seed, 0x73626d}));
  for (VertexId a = 0; a < spec.n; ++a) {
    for (VertexId c = a + 1; c < spec.n; ++c) {
      bool same = SbmBlock(a, spec.n, spec.communities) == SbmBlock(c, spec.n, spec.communities);
      if (rng.Uniform() < (same ? spec.p_in : spec.p_out)) {
        b.Edge(a, c);
        b.Edge(c, a);
      }
    }
  }
}

}  // namespace

GraphModel ParseGraphModel(std::string_view name) {
  for (auto m : {GraphModel::kPreferentialAttachment, GraphModel::kErdosRenyi, GraphModel::kSbm,
                 GraphModel::kPath, GraphModel::kStar, GraphModel::kClique}) {
    if (GraphModelName(m) == name) return m;
  }
  throw Error(ErrorCode::kUsage, fmt::format("unknown graph model '{}'", name));
}

std::string_view GraphModelName(GraphModel model) {
  switch (model) {
    case GraphModel::kPreferentialAttachment: return "preferential-attachment";
    case GraphModel::kErdosRenyi: return "erdos-renyi";
    case GraphModel::kSbm: return "sbm";
    case GraphModel::kPath: return "path";
    case GraphModel::kStar: return "star";
    case GraphModel::kClique: return "clique";
  }
  return "unknown";
}

GraphData Generate(const SyntheticSpec& spec) {
  if (spec.vertex_types == 0 || spec.edge_types == 0) {
    throw Error(ErrorCode::kUsage, "type counts must be >= 1");
  }
  Builder b(spec);
  switch (spec.model) {
    case GraphModel::kPath:
      b.Vertices(spec.n);
      for (VertexId v = 0; v + 1 < spec.n; ++v) b.Edge(v, v + 1);
      break;
    case GraphModel::kStar:
      b.Vertices(spec.n);
      for (VertexId v = 1; v < spec.n; ++v) b.Edge(0, v);
      break;
    case GraphModel::kClique:
      b.Vertices(spec.n);
      for (VertexId a = 0; a < spec.n; ++a) {
        for (VertexId c = 0; c < spec.n; ++c) {
          if (a != c) b.Edge(a, c);
        }
      }
      break;
    case GraphModel::kErdosRenyi:
      ErdosRenyi(spec, b);
      break;
    case GraphModel::kSbm:
      Sbm(spec, b);
      break;
    case GraphModel::kPreferentialAttachment:
      PreferentialAttachment(spec, b);
      break;
  }
  return std::move(b.graph);
}

}  // namespace shardgnn
