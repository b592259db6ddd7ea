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

#ifndef SHARDGNN_TESTS_ORACLES_H_
#define SHARDGNN_TESTS_ORACLES_H_

#include <cstdint>
#include <span>
#include <vector>

#include "shardgnn/gatne.h"
#include "shardgnn/gnn.h"
#include "shardgnn/graph_data.h"
#include "shardgnn/hierarchy.h"
#include "shardgnn/operators.h"

// Independent reference computations shared by the unit tests and the
// acceptance runner.
namespace shardgnn::oracles {

// Central difference step for every gradient check.
inline constexpr double kFdStep = 1e-5;

// ||a - n|| / max(||a|| + ||n||, 1e-6) over one gradient block.
double GradientError(std::span<const double> analytic, std::span<const double> numeric);

// Worst block error of one random instance of each operator, checking input
// and parameter gradients against central differences of <r, output> for a
// random r.
double AggregateGradError(AggregateKind kind, uint64_t seed);
double CombineGradError(CombineKind kind, Activation act, uint64_t seed);
double NormalizeGradError(uint64_t seed);
double SkipgramGradError(uint64_t seed);
// Whole-model check through GnnRuntime::Backward on a small random graph.
double GnnGradError(uint64_t seed);

// Algorithm-1 forward on the whole graph with dense matrices: every vertex at
// every hop, aggregating over all out-neighbors (self when there are none).
std::vector<Vector> DenseForward(const GraphData& graph, const GnnModel& model,
                                 const TrainConfig& cfg, std::span<const VertexId> batch);

struct GatneInstance {
  GatneVertex vertex;
  GatneEdgeType type;
  Matrix attr_transform;
};

GatneInstance RandomGatne(uint64_t seed);
// h = b + alpha * sum_t a_t M^T g_t + beta * D^T x, with Eigen.
Vector GatneOracle(const GatneInstance& inst);

struct CoarsenInstance {
  Matrix a;
  Matrix s;
  Matrix z;
};

// Symmetric A, row-stochastic S (some rows one-hot), dense Z.
CoarsenInstance RandomCoarsen(uint64_t seed);
CoarsenResult CoarsenOracle(const CoarsenInstance& inst);

double MaxAbsDiff(const Matrix& a, const Matrix& b);
double MaxAbsDiff(std::span<const double> a, std::span<const double> b);

}  // namespace shardgnn::oracles

#endif  // SHARDGNN_TESTS_ORACLES_H_
