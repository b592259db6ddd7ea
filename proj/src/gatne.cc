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

#include "shardgnn/gatne.h"

#include <fmt/format.h>

namespace shardgnn {

Vector GatneEmbedding(const GatneVertex& vertex, const GatneEdgeType& type,
                      const Matrix& attr_transform) {
  const size_t d = vertex.b.size();
  const size_t s = vertex.g.rows();
  const size_t t = vertex.g.cols();
  if (type.m.rows() != s || type.m.cols() != d) {
    throw Error(ErrorCode::kSchema,
                fmt::format("M must be {}x{}, got {}x{}", s, d, type.m.rows(), type.m.cols()));
  }
  if (type.a.size() != t) {
    throw Error(ErrorCode::kSchema, fmt::format("a must have {} entries", t));
  }
  if (attr_transform.rows() != vertex.x.size() || attr_transform.cols() != d) {
    throw Error(ErrorCode::kSchema,
                fmt::format("D must be {}x{}, got {}x{}", vertex.x.size(), d,
                            attr_transform.rows(), attr_transform.cols()));
  }
  Vector ga = vertex.g.Apply(type.a);
  Vector specific = type.m.ApplyTransposed(ga);
  Vector attr = attr_transform.ApplyTransposed(vertex.x);
  Vector h(d);
  for (size_t i = 0; i < d; ++i) {
    h[i] = vertex.b[i] + type.alpha * specific[i] + type.beta * attr[i];
  }
  return h;
}

Vector GatneConcatenated(const GatneVertex& vertex, std::span<const GatneEdgeType> types,
                         const Matrix& attr_transform) {
  Vector out;
  for (const auto& type : types) {
    Vector h = GatneEmbedding(vertex, type, attr_transform);
    out.insert(out.end(), h.begin(), h.end());
  }
  return out;
}

Vector UniformCoefficients(size_t t) {
  return Vector(t, t ? 1.0 / static_cast<double>(t) : 0.0);
}

}  // namespace shardgnn
