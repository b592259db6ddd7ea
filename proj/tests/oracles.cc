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

#include "oracles.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

#include <Eigen/Dense>

#include "shardgnn/partitioner.h"
#include "shardgnn/random.h"
#include "shardgnn/sampling.h"
#include "shardgnn/skipgram.h"

namespace shardgnn::oracles {
namespace {

Vector RandomVector(Rng& rng, size_t n, double scale = 1.0) {
  Vector v(n);
  for (auto& x : v) x = scale * (2 * rng.Uniform() - 1);
  return v;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Central differences of f with respect to every entry of `params`.
Vector Numeric(std::vector<double>& params, const std::function<double()>& f) {
  Vector out(params.size());
  for (size_t i = 0; i < params.size(); ++i) {
    double keep = params[i];
    params[i] = keep + kFdStep;
    double up = f();
    params[i] = keep - kFdStep;
    double down = f();
    params[i] = keep;
    out[i] = (up - down) / (2 * kFdStep);
  }
  return out;
}

Eigen::MatrixXd ToEigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (size_t r = 0; r < m.rows(); ++r) {
    for (size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
  }
  return e;
}

Matrix FromEigen(const Eigen::MatrixXd& e) {
  Matrix m(e.rows(), e.cols());
  for (Eigen::Index r = 0; r < e.rows(); ++r) {
    for (Eigen::Index c = 0; c < e.cols(); ++c) m(r, c) = e(r, c);
  }
  return m;
}

Matrix RandomMatrix(Rng& rng, size_t rows, size_t cols) {
  Matrix m(rows, cols);
  for (auto& x : m.data()) x = 2 * rng.Uniform() - 1;
  return m;
}

}  // namespace

double GradientError(std::span<const double> analytic, std::span<const double> numeric) {
  double diff = 0, na = 0, nn = 0;
  for (size_t i = 0; i < analytic.size(); ++i) {
    diff += (analytic[i] - numeric[i]) * (analytic[i] - numeric[i]);
    na += analytic[i] * analytic[i];
    nn += numeric[i] * numeric[i];
  }
  return std::sqrt(diff) / std::max(std::sqrt(na) + std::sqrt(nn), 1e-6);
}

double AggregateGradError(AggregateKind kind, uint64_t seed) {
  Rng rng(MixSeed({seed, 0x61677267}));
  size_t d = 1 + rng.Below(6), n = 1 + rng.Below(6);
  OperatorSpec spec = OperatorSpec::Init(d, kind, CombineKind::kSumDense, Activation::kRelu,
                                         MixSeed({seed, 1}));
  std::vector<Vector> xs(n);
  for (auto& x : xs) x = RandomVector(rng, d);
  Vector weights(n);
  for (auto& w : weights) w = 0.1 + rng.Uniform();
  Vector r = RandomVector(rng, d);

  auto loss = [&] {
    std::vector<std::span<const double>> in(xs.begin(), xs.end());
    return Dot(r, Aggregate(spec, in, weights));
  };
  AggregateTape tape;
  OperatorGrads grads(spec);
  std::vector<std::span<const double>> in(xs.begin(), xs.end());
  Aggregate(spec, in, weights, &tape);
  auto dx = AggregateBackward(spec, tape, r, &grads);

  double worst = 0;
  for (size_t i = 0; i < n; ++i) {
    worst = std::max(worst, GradientError(dx[i], Numeric(xs[i], loss)));
  }
  if (kind == AggregateKind::kMaxPool) {
    worst = std::max(worst, GradientError(grads.pool_w.data(), Numeric(spec.pool_w.data(), loss)));
    worst = std::max(worst, GradientError(grads.pool_b, Numeric(spec.pool_b, loss)));
  }
  return worst;
}

double CombineGradError(CombineKind kind, Activation act, uint64_t seed) {
  Rng rng(MixSeed({seed, 0x636f6d62}));
  size_t d = 1 + rng.Below(6);
  OperatorSpec spec = OperatorSpec::Init(d, AggregateKind::kMean, kind, act, MixSeed({seed, 2}));
  Vector prev = RandomVector(rng, d), agg = RandomVector(rng, d), r = RandomVector(rng, d);
  auto loss = [&] { return Dot(r, Combine(spec, prev, agg)); };
  CombineTape tape;
  OperatorGrads grads(spec);
  Combine(spec, prev, agg, &tape);
  auto [dp, da] = CombineBackward(spec, tape, r, &grads);
  double worst = GradientError(dp, Numeric(prev, loss));
  worst = std::max(worst, GradientError(da, Numeric(agg, loss)));
  worst = std::max(worst, GradientError(grads.w.data(), Numeric(spec.w.data(), loss)));
  return worst;
}

double NormalizeGradError(uint64_t seed) {
  Rng rng(MixSeed({seed, 0x6e6f726d}));
  size_t d = 1 + rng.Below(8);
  Vector x = RandomVector(rng, d, 3.0), r = RandomVector(rng, d);
  auto loss = [&] { return Dot(r, L2Normalize(x)); };
  return GradientError(L2NormalizeBackward(x, r), Numeric(x, loss));
}

double SkipgramGradError(uint64_t seed) {
  Rng rng(MixSeed({seed, 0x736b6970}));
  size_t d = 1 + rng.Below(8), k = rng.Below(6);
  Vector center = RandomVector(rng, d), context = RandomVector(rng, d);
  std::vector<Vector> negs(k);
  for (auto& v : negs) v = RandomVector(rng, d);
  auto loss = [&] {
    std::vector<std::span<const double>> n(negs.begin(), negs.end());
    return SkipgramNsLoss(center, context, n).loss;
  };
  std::vector<std::span<const double>> n(negs.begin(), negs.end());
  NsLoss ns = SkipgramNsLoss(center, context, n);
  double worst = GradientError(ns.d_center, Numeric(center, loss));
  worst = std::max(worst, GradientError(ns.d_context, Numeric(context, loss)));
  for (size_t i = 0; i < k; ++i) {
    worst = std::max(worst, GradientError(ns.d_negatives[i], Numeric(negs[i], loss)));
  }
  return worst;
}

double GnnGradError(uint64_t seed) {
  Rng rng(MixSeed({seed, 0x676e6e}));
  const uint64_t n = 8 + rng.Below(8);
  GraphData g(3, 0);
  g.vertex_types().Intern("v");
  g.edge_types().Intern("e");
  for (VertexId v = 0; v < n; ++v) {
    Vector x = RandomVector(rng, 3);
    g.AddVertex(v, VertexType{0}, x);
  }
  for (size_t e = 0; e < 3 * n; ++e) {
    g.AddEdge(rng.Below(n), rng.Below(n), EdgeType{0}, 0.5 + rng.Uniform());
  }
  PartitionPlan plan;
  plan.shards = 2;
  auto built = Partition(g, plan);
  SamplerOptions opts;
  opts.buckets_per_shard = 1;
  GraphService svc(built.shards, opts);

  TrainConfig cfg;
  cfg.d = 4;
  cfg.k_max = 2;
  cfg.hop_nums = {3, 2};
  cfg.seed = seed;
  const AggregateKind kinds[] = {AggregateKind::kMean, AggregateKind::kWeightedMean,
                                 AggregateKind::kMaxPool, AggregateKind::kSum};
  cfg.aggregate = kinds[seed % 4];
  cfg.combine = seed % 2 ? CombineKind::kConcatDense : CombineKind::kSumDense;
  GnnRuntime rt(svc, cfg, GnnModel::Init(cfg, 3));

  std::vector<VertexId> batch{0, 1, 2, 3};
  SamplePlan sp = rt.Plan(batch, MixSeed({seed, 9}));
  std::vector<Vector> r(batch.size());
  for (auto& x : r) x = RandomVector(rng, cfg.d);
  auto loss = [&] {
    auto out = rt.Forward(batch, sp, true);
    double s = 0;
    for (size_t i = 0; i < batch.size(); ++i) s += Dot(r[i], out[i]);
    return s;
  };
  ForwardTape tape;
  rt.Forward(batch, sp, true, nullptr, &tape);
  std::unordered_map<VertexId, Vector> upstream;
  for (size_t i = 0; i < batch.size(); ++i) upstream.emplace(batch[i], r[i]);
  GnnGrads grads(rt.model());
  rt.Backward(tape, upstream, grads);

  GnnModel& m = rt.mutable_model();
  double worst = GradientError(grads.projection.data(), Numeric(m.projection.data(), loss));
  for (size_t l = 0; l < m.layers.size(); ++l) {
    worst = std::max(worst, GradientError(grads.layers[l].w.data(), Numeric(m.layers[l].w.data(), loss)));
    if (cfg.aggregate == AggregateKind::kMaxPool) {
      worst = std::max(worst, GradientError(grads.layers[l].pool_w.data(),
                                            Numeric(m.layers[l].pool_w.data(), loss)));
      worst = std::max(worst,
                       GradientError(grads.layers[l].pool_b, Numeric(m.layers[l].pool_b, loss)));
    }
  }
  return worst;
}

std::vector<Vector> DenseForward(const GraphData& graph, const GnnModel& model,
                                 const TrainConfig& cfg, std::span<const VertexId> batch) {
  std::vector<VertexId> ids = graph.AllVertexIds();
  const Eigen::Index n = static_cast<Eigen::Index>(ids.size());
  auto at = [&](VertexId v) {
    return static_cast<Eigen::Index>(std::lower_bound(ids.begin(), ids.end(), v) - ids.begin());
  };
  Eigen::MatrixXd count = Eigen::MatrixXd::Zero(n, n), weight = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : graph.edges()) {
    if (!Matches(cfg.edge_type, e.type)) continue;
    count(at(e.src), at(e.dst)) += 1;
    weight(at(e.src), at(e.dst)) += e.weight;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (count.row(i).sum() == 0) {
      count(i, i) = 1;
      weight(i, i) = 1;
    }
  }

  const size_t arity = graph.vertex_arity();
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, arity);
  for (size_t i = 0; i < graph.vertices().size(); ++i) {
    auto a = graph.vertex_attr(i);
    for (size_t c = 0; c < arity; ++c) x(at(graph.vertices()[i].id), c) = a[c];
  }
  Eigen::MatrixXd h = model.projection.empty() ? x : x * ToEigen(model.projection).transpose();

  for (uint32_t k = 1; k <= cfg.k_max; ++k) {
    const OperatorSpec& spec = model.layers[k - 1];
    Eigen::MatrixXd agg(n, h.cols());
    switch (spec.aggregate) {
      case AggregateKind::kSum:
        agg = count * h;
        break;
      case AggregateKind::kMean:
        agg = count.rowwise().sum().cwiseInverse().asDiagonal() * (count * h);
        break;
      case AggregateKind::kWeightedMean:
        agg = weight.rowwise().sum().cwiseInverse().asDiagonal() * (weight * h);
        break;
      case AggregateKind::kMaxPool: {
        Eigen::MatrixXd pooled = h * ToEigen(spec.pool_w).transpose();
        pooled.rowwise() += Eigen::Map<const Eigen::RowVectorXd>(spec.pool_b.data(), h.cols());
        pooled = pooled.cwiseMax(0.0);
        for (Eigen::Index i = 0; i < n; ++i) {
          Eigen::RowVectorXd best = Eigen::RowVectorXd::Constant(h.cols(), -INFINITY);
          for (Eigen::Index j = 0; j < n; ++j) {
            if (count(i, j) > 0) best = best.cwiseMax(pooled.row(j));
          }
          agg.row(i) = best;
        }
        break;
      }
    }
    Eigen::MatrixXd in;
    if (spec.combine == CombineKind::kConcatDense) {
      in.resize(n, 2 * h.cols());
      in << h, agg;
    } else {
      in = h + agg;
    }
    Eigen::MatrixXd z = in * ToEigen(spec.w).transpose();
    if (spec.activation == Activation::kRelu) z = z.cwiseMax(0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      double len = z.row(i).norm();
      if (len > 0) z.row(i) /= len;
    }
    h = z;
  }
  std::vector<Vector> out;
  for (VertexId v : batch) {
    Eigen::RowVectorXd row = h.row(at(v));
    out.emplace_back(row.data(), row.data() + row.size());
  }
  return out;
}

GatneInstance RandomGatne(uint64_t seed) {
  Rng rng(MixSeed({seed, 0x6761746e}));
  size_t d = 1 + rng.Below(6), s = 1 + rng.Below(6), t = 1 + rng.Below(5), m = rng.Below(6);
  GatneInstance inst;
  inst.vertex.b = RandomVector(rng, d);
  inst.vertex.g = RandomMatrix(rng, s, t);
  inst.vertex.x = RandomVector(rng, m);
  inst.type.m = RandomMatrix(rng, s, d);
  inst.type.a = RandomVector(rng, t);
  inst.type.alpha = 2 * rng.Uniform() - 1;
  inst.type.beta = 2 * rng.Uniform() - 1;
  inst.attr_transform = RandomMatrix(rng, m, d);
  return inst;
}

Vector GatneOracle(const GatneInstance& inst) {
  Eigen::Map<const Eigen::VectorXd> b(inst.vertex.b.data(), inst.vertex.b.size());
  Eigen::Map<const Eigen::VectorXd> x(inst.vertex.x.data(), inst.vertex.x.size());
  Eigen::MatrixXd g = ToEigen(inst.vertex.g), m = ToEigen(inst.type.m);
  Eigen::MatrixXd dt = ToEigen(inst.attr_transform);
  Eigen::VectorXd specific = Eigen::VectorXd::Zero(b.size());
  for (Eigen::Index t = 0; t < g.cols(); ++t) {
    specific += inst.type.a[t] * (m.transpose() * g.col(t));
  }
  Eigen::VectorXd h = b + inst.type.alpha * specific;
  if (x.size() > 0) h += inst.type.beta * (dt.transpose() * x);
  return Vector(h.data(), h.data() + h.size());
}

CoarsenInstance RandomCoarsen(uint64_t seed) {
  Rng rng(MixSeed({seed, 0x636f6172}));
  size_t n = 1 + rng.Below(12), c = 1 + rng.Below(n), f = 1 + rng.Below(5);
  CoarsenInstance inst{Matrix(n, n), Matrix(n, c), RandomMatrix(rng, n, f)};
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i; j < n; ++j) {
      double w = rng.Uniform() < 0.4 ? 0.0 : rng.Uniform() * 3;
      inst.a(i, j) = inst.a(j, i) = w;
    }
    if (rng.Uniform() < 0.3) {
      inst.s(i, rng.Below(c)) = 1.0;
    } else {
      double sum = 0;
      for (size_t j = 0; j < c; ++j) sum += inst.s(i, j) = rng.Uniform();
      for (size_t j = 0; j < c; ++j) inst.s(i, j) /= sum;
    }
  }
  return inst;
}

CoarsenResult CoarsenOracle(const CoarsenInstance& inst) {
  Eigen::MatrixXd s = ToEigen(inst.s);
  return {FromEigen(s.transpose() * ToEigen(inst.a) * s), FromEigen(s.transpose() * ToEigen(inst.z))};
}

double MaxAbsDiff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  return MaxAbsDiff(a.data(), b.data());
}

double MaxAbsDiff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0;
  for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace shardgnn::oracles
