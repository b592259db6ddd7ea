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

#ifndef SHARDGNN_HIERARCHY_H_
#define SHARDGNN_HIERARCHY_H_

#include <cstdint>

#include "shardgnn/operators.h"

namespace shardgnn {

struct CoarsenResult {
  Matrix a;  // S^T A S
  Matrix x;  // S^T Z
};

// One pooling step. `s` maps rows (current clusters) to columns (next-level
// clusters) and must be row-stochastic: entries >= 0, rows summing to 1
// within 1e-9. Throws kSchema otherwise or on shape mismatch.
CoarsenResult Coarsen(const Matrix& a, const Matrix& s, const Matrix& z);

// Hard assignment of the vertices of a symmetric adjacency matrix into
// `clusters` groups by k-means on the leading eigenvectors of the normalized
// adjacency. Deterministic for a given seed.
Matrix SpectralAssignment(const Matrix& a, size_t clusters, uint64_t seed = 0);

}  // namespace shardgnn

#endif  // SHARDGNN_HIERARCHY_H_
