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

#include "shardgnn/attribute_index.h"

#include <cmath>
#include <cstring>
#include <string>

#include "shardgnn/common.h"
#include "shardgnn/random.h"

namespace shardgnn {
namespace {

uint64_t ContentHash(std::span<const double> attr) {
  uint64_t h = 0xcbf29ce484222325ULL ^ attr.size();
  for (double x : attr) {
    uint64_t bits;
    std::memcpy(&bits, &x, sizeof(bits));
    h = SplitMix64(h ^ bits);
  }
  return h;
}

}  // namespace

AttributeIndex::AttributeIndex(size_t arity, size_t cache_capacity)
    : arity_(arity), cache_(cache_capacity) {}

uint32_t AttributeIndex::Intern(std::span<const double> attr) {
  if (attr.size() != arity_) {
    throw Error(ErrorCode::kSchema,
                "attribute arity " + std::to_string(attr.size()) +
                    " does not match index arity " + std::to_string(arity_));
  }
  for (double x : attr) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::kSchema, "attribute values must be finite");
    }
  }
  uint64_t h = ContentHash(attr);
  auto [first, last] = lookup_.equal_range(h);
  for (auto it = first; it != last; ++it) {
    auto stored = Peek(it->second);
    if (arity_ == 0 ||
        std::memcmp(stored.data(), attr.data(), arity_ * sizeof(double)) == 0) {
      return it->second;
    }
  }
  auto idx = static_cast<uint32_t>(count_++);
  entries_.insert(entries_.end(), attr.begin(), attr.end());
  lookup_.emplace(h, idx);
  return idx;
}

AttributeLookup AttributeIndex::Get(uint32_t idx) {
  if (idx >= count_) {
    throw Error(ErrorCode::kLookup, "attribute index " + std::to_string(idx) +
                                        " out of range (size " +
                                        std::to_string(count_) + ")");
  }
  if (auto* cached = cache_.Get(idx)) {
    ++hits_;
    return {*cached, true};
  }
  ++misses_;
  auto span = Peek(idx);
  AttributeVector values(span.begin(), span.end());
  cache_.Put(idx, values);
  return {std::move(values), false};
}

std::span<const double> AttributeIndex::Peek(uint32_t idx) const {
  if (idx >= count_) {
    throw Error(ErrorCode::kLookup,
                "attribute index " + std::to_string(idx) + " out of range");
  }
  return {entries_.data() + static_cast<size_t>(idx) * arity_, arity_};
}

}  // namespace shardgnn
