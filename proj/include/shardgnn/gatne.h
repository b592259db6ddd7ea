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

#ifndef SHARDGNN_GATNE_H_
#define SHARDGNN_GATNE_H_

#include <span>
#include <vector>

#include "shardgnn/operators.h"

namespace shardgnn {

// Per-vertex inputs: general embedding b (d), meta-specific embeddings as the
// columns of g (s x t), and attributes x (m).
struct GatneVertex {
  Vector b;
  Matrix g;
  Vector x;
};

// Per-edge-type inputs: transform m (s x d), one coefficient per
// meta-specific block a (t), and the two mixing scalars.
struct GatneEdgeType {
  Matrix m;
  Vector a;
  double alpha = 1.0;
  double beta = 1.0;
};

// h = b + alpha * M^T (g a) + beta * D^T x, with the attribute transform
// D (m x d). Throws kSchema on inconsistent shapes.
Vector GatneEmbedding(const GatneVertex& vertex, const GatneEdgeType& type,
                      const Matrix& attr_transform);

// Concatenation of GatneEmbedding over `types`, in order.
Vector GatneConcatenated(const GatneVertex& vertex, std::span<const GatneEdgeType> types,
                         const Matrix& attr_transform);

// a with every entry 1/t.
Vector UniformCoefficients(size_t t);

}  // namespace shardgnn

#endif  // SHARDGNN_GATNE_H_
