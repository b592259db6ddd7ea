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

#ifndef SHARDGNN_COMMON_H_
#define SHARDGNN_COMMON_H_

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace shardgnn {

using VertexId = uint64_t;
using ShardId = uint32_t;

struct VertexType {
  uint16_t code = 0;
  friend constexpr auto operator<=>(VertexType, VertexType) = default;
};

struct EdgeType {
  uint16_t code = 0;
  friend constexpr auto operator<=>(EdgeType, EdgeType) = default;
};

// Wildcard accepted by samplers and neighbor queries: matches every edge type.
inline constexpr EdgeType kAnyEdgeType{std::numeric_limits<uint16_t>::max()};

inline bool Matches(EdgeType filter, EdgeType actual) {
  return filter == kAnyEdgeType || filter == actual;
}

enum class ErrorCode {
  kSchema,
  kLookup,
  kNotLocal,
  kUnmappedVertex,
  kDegenerateSample,
  kEmptyDomain,
  kCandidateExhausted,
  kEmptyNeighborhood,
  kFeatureMissing,
  kStateMissing,
  kDivergence,
  kParse,
  kIo,
  kUsage,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Raised when a shard is asked about a vertex it neither owns nor caches.
class NotLocalError : public Error {
 public:
  NotLocalError(VertexId vertex, ShardId owner)
      : Error(ErrorCode::kNotLocal,
              "vertex " + std::to_string(vertex) + " is owned by shard " +
                  std::to_string(owner)),
        vertex_(vertex),
        owner_(owner) {}

  VertexId vertex() const { return vertex_; }
  ShardId owner() const { return owner_; }

 private:
  VertexId vertex_;
  ShardId owner_;
};

// Bidirectional name <-> code mapping for vertex and edge type labels.
class TypeRegistry {
 public:
  uint16_t Intern(std::string_view name);
  // Returns the code for a known label; throws kSchema otherwise.
  uint16_t Code(std::string_view name) const;
  const std::string& Name(uint16_t code) const;
  size_t size() const { return names_.size(); }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, uint16_t> codes_;
};

}  // namespace shardgnn

#endif  // SHARDGNN_COMMON_H_
